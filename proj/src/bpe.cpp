#include "fakerev/bpe.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "fakerev/error.hpp"
#include "fakerev/text.hpp"

namespace fakerev {
namespace {

constexpr std::string_view kFormatTag = "#fakerev-bpe v1";

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

std::vector<std::string> initial_symbols(std::string_view word) {
  auto symbols = utf8::code_points(word);
  symbols.emplace_back(BpeModel::kEndOfWord);
  return symbols;
}

// Merges every non-overlapping occurrence of (left, right), scanning left to right.
bool apply_merge(std::vector<std::string>& symbols, const BpeModel::Pair& pair) {
  bool changed = false;
  std::vector<std::string> out;
  out.reserve(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i + 1 < symbols.size() && symbols[i] == pair.first && symbols[i + 1] == pair.second) {
      out.push_back(symbols[i] + symbols[i + 1]);
      ++i;
      changed = true;
    } else {
      out.push_back(std::move(symbols[i]));
    }
  }
  symbols = std::move(out);
  return changed;
}

bool is_atom(const std::string& symbol) {
  return symbol == BpeModel::kEndOfWord || utf8::length(symbol) == 1;
}

}  // namespace

BpeModel::BpeModel(std::vector<Pair> merges) : merges_(std::move(merges)) {
  std::set<std::string> produced;
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    const auto& [left, right] = merges_[r];
    for (const auto* part : {&left, &right}) {
      if (part->empty()) throw PreconditionError("bpe: empty merge part");
      if (is_atom(*part)) {
        alphabet_.insert(*part);
      } else if (!produced.contains(*part)) {
        throw PreconditionError("bpe: merge " + std::to_string(r + 1) + " uses '" + *part +
                                "' before any merge produces it");
      }
    }
    if (!rank_.emplace(merges_[r], r).second) {
      throw PreconditionError("bpe: duplicate merge '" + left + " " + right + "'");
    }
    produced.insert(left + right);
  }
}

BpeModel BpeModel::train(std::span<const std::string> corpus, std::size_t num_merges, std::size_t min_pair_count) {
  std::map<std::string, std::size_t> word_freq;
  for (const auto& doc : corpus) {
    for (auto w : split_whitespace(doc)) ++word_freq[std::string(w)];
  }
  std::vector<std::pair<std::vector<std::string>, std::size_t>> words;
  words.reserve(word_freq.size());
  std::set<std::string> alphabet;
  for (const auto& [w, f] : word_freq) {
    words.emplace_back(initial_symbols(w), f);
    alphabet.insert(words.back().first.begin(), words.back().first.end());
  }

  std::vector<Pair> merges;
  while (merges.size() < num_merges) {
    std::map<Pair, std::size_t> counts;
    for (const auto& [symbols, f] : words) {
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) counts[{symbols[i], symbols[i + 1]}] += f;
    }
    // std::map iterates pairs in lexicographic order, so strict '>' keeps the
    // smallest pair among equal counts.
    const Pair* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [pair, c] : counts) {
      if (c > best_count) {
        best = &pair;
        best_count = c;
      }
    }
    if (best == nullptr || best_count < std::max<std::size_t>(min_pair_count, 1)) break;
    const Pair chosen = *best;
    for (auto& [symbols, f] : words) apply_merge(symbols, chosen);
    merges.push_back(chosen);
  }
  BpeModel model(std::move(merges));
  model.alphabet_.insert(alphabet.begin(), alphabet.end());
  return model;
}

std::vector<std::string> BpeModel::encode_word(std::string_view word) const {
  auto symbols = initial_symbols(word);
  for (;;) {
    // Lowest-ranked pair present. A merged symbol only appears in merges of
    // higher rank, so this equals replaying the merges in training order.
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto it = rank_.find({symbols[i], symbols[i + 1]});
      if (it != rank_.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == std::numeric_limits<std::size_t>::max()) break;
    apply_merge(symbols, merges_[best_rank]);
  }
  std::vector<std::string> tokens;
  tokens.reserve(symbols.size());
  for (auto& s : symbols) {
    if (s.size() >= kEndOfWord.size() && std::string_view(s).substr(s.size() - kEndOfWord.size()) == kEndOfWord) {
      s.resize(s.size() - kEndOfWord.size());
    }
    if (!s.empty()) tokens.push_back(std::move(s));
  }
  return tokens;
}

std::vector<std::string> BpeModel::encode(std::string_view text) const {
  std::vector<std::string> tokens;
  for (auto w : split_whitespace(text)) {
    auto sub = encode_word(w);
    tokens.insert(tokens.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
  }
  return tokens;
}

void BpeModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << kFormatTag << '\n';
  for (const auto& [l, r] : merges_) out << l << ' ' << r << '\n';
}

BpeModel BpeModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kFormatTag) {
    throw DataError(path.string() + ": missing '" + std::string(kFormatTag) + "' header");
  }
  std::vector<Pair> merges;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      throw DataError(path.string() + ": line " + std::to_string(n) + ": expected 'left right'");
    }
    merges.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  try {
    return BpeModel(std::move(merges));
  } catch (const PreconditionError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> bpe_featurize(const BpeModel& model, std::string_view text) {
  std::string joined;
  for (const auto& w : tokenize_words(text)) {
    if (!joined.empty()) joined.push_back(' ');
    joined += w;
  }
  return model.encode(joined);
}

}  // namespace fakerev
