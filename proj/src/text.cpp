#include "fakerev/text.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "fakerev/error.hpp"
#include "fakerev/random.hpp"

namespace fakerev {
namespace utf8 {
namespace {

// Byte length of the sequence starting at text[i], or 1 if malformed.
std::size_t sequence_length(std::string_view text, std::size_t i) noexcept {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t len = 1;
  if (lead >= 0xF0 && lead < 0xF8) {
    len = 4;
  } else if (lead >= 0xE0) {
    len = lead < 0xF0 ? 3 : 1;
  } else if (lead >= 0xC2) {
    len = 2;
  }
  if (i + len > text.size()) return 1;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

char32_t decode(std::string_view seq) noexcept {
  const auto b = [&](std::size_t k) { return static_cast<char32_t>(static_cast<unsigned char>(seq[k])); };
  switch (seq.size()) {
    case 2:
      return ((b(0) & 0x1F) << 6) | (b(1) & 0x3F);
    case 3:
      return ((b(0) & 0x0F) << 12) | ((b(1) & 0x3F) << 6) | (b(2) & 0x3F);
    case 4:
      return ((b(0) & 0x07) << 18) | ((b(1) & 0x3F) << 12) | ((b(2) & 0x3F) << 6) | (b(3) & 0x3F);
    default:
      return b(0);
  }
}

}  // namespace

std::vector<std::string> code_points(std::string_view text) {
  std::vector<std::string> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const auto len = sequence_length(text, i);
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::size_t length(std::string_view text) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); i += sequence_length(text, i)) ++n;
  return n;
}

}  // namespace utf8

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_word_code_point(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  switch (cp) {
    case 0x00A0:  // no-break space
    case 0x00AB:
    case 0x00BB:
    case 0x2013:
    case 0x2014:
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x2022:
    case 0x2026:
      return false;
    default:
      return true;
  }
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && is_terminator(text[run_end])) ++run_end;
    if (run_end == text.size() || is_space(text[run_end])) {
      const auto piece = trim(text.substr(start, run_end - start));
      if (!piece.empty()) out.emplace_back(piece);
      start = run_end;
    }
    i = run_end;
  }
  const auto tail = trim(text.substr(start));
  if (!tail.empty()) out.emplace_back(tail);
  return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    const auto len = utf8::sequence_length(text, i);
    const auto seq = text.substr(i, len);
    const char32_t cp = utf8::decode(seq);
    if (is_word_code_point(cp)) {
      if (cp >= 'A' && cp <= 'Z') {
        current.push_back(static_cast<char>(cp - 'A' + 'a'));
      } else {
        current.append(seq);
      }
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
    i += len;
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<std::uint32_t>(i)).second) {
      throw PreconditionError("vocabulary: duplicate token '" + tokens_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> docs) {
  std::vector<std::string> all;
  for (const auto& d : docs) all.insert(all.end(), d.begin(), d.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return Vocabulary(std::move(all));
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::fingerprint() const noexcept {
  std::uint64_t h = fnv1a64("vocab");
  for (const auto& t : tokens_) {
    h = fnv1a64(t, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw DataError(path.string() + ": empty token on line " + std::to_string(tokens.size() + 1));
    tokens.push_back(line);
  }
  try {
    return Vocabulary(std::move(tokens));
  } catch (const PreconditionError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

DocTermMatrix::DocTermMatrix(std::size_t n_terms, std::vector<std::size_t> row_offsets, std::vector<TermCount> entries)
    : n_terms_(n_terms), row_offsets_(std::move(row_offsets)), entries_(std::move(entries)) {
  if (row_offsets_.empty() || row_offsets_.front() != 0 || row_offsets_.back() != entries_.size()) {
    throw PreconditionError("doc-term matrix: inconsistent row offsets");
  }
  for (std::size_t d = 0; d + 1 < row_offsets_.size(); ++d) {
    if (row_offsets_[d] > row_offsets_[d + 1]) throw PreconditionError("doc-term matrix: decreasing row offsets");
    for (std::size_t k = row_offsets_[d]; k < row_offsets_[d + 1]; ++k) {
      const auto& e = entries_[k];
      if (e.count == 0 || e.term >= n_terms_) throw PreconditionError("doc-term matrix: invalid entry");
      if (k > row_offsets_[d] && entries_[k - 1].term >= e.term) {
        throw PreconditionError("doc-term matrix: row terms not strictly increasing");
      }
    }
  }
}

DocTermMatrix DocTermMatrix::select_rows(std::span<const std::size_t> docs) const {
  std::vector<std::size_t> offsets{0};
  std::vector<TermCount> entries;
  for (auto d : docs) {
    const auto r = row(d);
    entries.insert(entries.end(), r.begin(), r.end());
    offsets.push_back(entries.size());
  }
  return DocTermMatrix(n_terms_, std::move(offsets), std::move(entries));
}

std::pair<DocTermMatrix, Vocabulary> vectorize(std::span<const std::vector<std::string>> docs,
                                               const Vocabulary* vocab, Exec exec) {
  Vocabulary built;
  if (vocab == nullptr) {
    built = Vocabulary::build(docs);
    vocab = &built;
  }
  std::vector<std::vector<TermCount>> rows(docs.size());
  for_each_index(docs.size(), exec, [&](std::size_t d) {
    std::vector<std::uint32_t> ids;
    ids.reserve(docs[d].size());
    for (const auto& tok : docs[d]) {
      if (auto id = vocab->index_of(tok)) ids.push_back(*id);
    }
    std::sort(ids.begin(), ids.end());
    auto& row = rows[d];
    for (std::size_t k = 0; k < ids.size();) {
      std::size_t j = k;
      while (j < ids.size() && ids[j] == ids[k]) ++j;
      row.push_back({ids[k], static_cast<std::uint32_t>(j - k)});
      k = j;
    }
  });
  std::vector<std::size_t> offsets{0};
  std::vector<TermCount> entries;
  for (auto& row : rows) {
    entries.insert(entries.end(), row.begin(), row.end());
    offsets.push_back(entries.size());
  }
  DocTermMatrix matrix(vocab->size(), std::move(offsets), std::move(entries));
  return {std::move(matrix), vocab == &built ? std::move(built) : *vocab};
}

}  // namespace fakerev
