#include "fakerev/lm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "fakerev/error.hpp"
#include "fakerev/random.hpp"
#include "fakerev/text.hpp"

namespace fakerev {
namespace {

constexpr std::string_view kFormatTag = "#fakerev-ngram v1";
constexpr std::string_view kUnseen = "<unseen>";

std::string format_prob(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    parts.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return parts;
}

}  // namespace

double perplexity(const PerplexityProvider& lm, std::span<const std::string> tokens) {
  if (tokens.empty()) throw PreconditionError("perplexity: empty token sequence");
  const auto logp = lm.token_log_probs(tokens);
  double nll = 0.0;
  for (double lp : logp) nll -= lp;
  return std::exp(nll / static_cast<double>(logp.size()));
}

NGramModel NGramModel::train(std::span<const std::vector<std::string>> corpus, const NGramOptions& options) {
  if (options.order < 1) throw PreconditionError("train_ngram: order must be >= 1");
  if (!(options.k > 0.0)) throw PreconditionError("train_ngram: k must be > 0");
  if (corpus.empty()) throw PreconditionError("train_ngram: empty corpus");

  NGramModel m;
  m.order_ = options.order;
  m.k_ = options.k;

  std::set<std::string> kept;
  if (options.vocabulary) {
    kept.insert(options.vocabulary->begin(), options.vocabulary->end());
  } else {
    std::map<std::string, std::size_t> freq;
    for (const auto& doc : corpus) {
      for (const auto& t : doc) ++freq[t];
    }
    for (const auto& [t, c] : freq) {
      if (c >= options.min_count) kept.insert(t);
    }
  }
  kept.erase(std::string(kUnknown));
  kept.erase(std::string(kStart));
  m.tokens_.assign(kept.begin(), kept.end());
  for (std::size_t i = 0; i < m.tokens_.size(); ++i) m.ids_.emplace(m.tokens_[i], static_cast<Id>(i + 1));

  struct Counts {
    std::size_t total = 0;
    std::map<Id, std::size_t> next;
  };
  std::map<std::string, Counts> counts;
  const auto history = static_cast<std::size_t>(m.order_ - 1);
  std::vector<Id> padded;
  for (const auto& doc : corpus) {
    padded.assign(history, kStartId);
    for (const auto& t : doc) padded.push_back(m.id_of(t));
    for (std::size_t i = history; i < padded.size(); ++i) {
      auto& c = counts[m.context_key(std::span(padded).subspan(i - history, history))];
      ++c.total;
      ++c.next[padded[i]];
    }
  }

  const double v = static_cast<double>(m.vocab_size());
  for (const auto& [key, c] : counts) {
    ContextTable table;
    const double denom = static_cast<double>(c.total) + m.k_ * v;
    table.unseen = m.k_ / denom;
    for (const auto& [id, n] : c.next) table.seen.emplace(id, (static_cast<double>(n) + m.k_) / denom);
    m.tables_.emplace(key, std::move(table));
  }
  return m;
}

NGramModel::Id NGramModel::id_of(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnknownId : it->second;
}

std::string NGramModel::context_key(std::span<const Id> context) const {
  std::string key(context.size() * sizeof(Id), '\0');
  for (std::size_t i = 0; i < context.size(); ++i) {
    for (std::size_t b = 0; b < sizeof(Id); ++b) key[i * sizeof(Id) + b] = static_cast<char>((context[i] >> (8 * b)) & 0xFF);
  }
  return key;
}

double NGramModel::probability_ids(std::span<const Id> context, Id token) const {
  const auto it = tables_.find(context_key(context));
  if (it == tables_.end()) return 1.0 / static_cast<double>(vocab_size());
  const auto hit = it->second.seen.find(token);
  return hit == it->second.seen.end() ? it->second.unseen : hit->second;
}

double NGramModel::probability(std::span<const std::string> context, std::string_view token) const {
  const auto history = static_cast<std::size_t>(order_ - 1);
  std::vector<Id> ctx(history, kStartId);
  const std::size_t take = std::min(history, context.size());
  for (std::size_t i = 0; i < take; ++i) ctx[history - take + i] = id_of(context[context.size() - take + i]);
  return probability_ids(ctx, id_of(token));
}

std::vector<double> NGramModel::token_log_probs(std::span<const std::string> tokens) const {
  const auto history = static_cast<std::size_t>(order_ - 1);
  std::vector<Id> padded(history, kStartId);
  for (const auto& t : tokens) padded.push_back(id_of(t));
  std::vector<double> out;
  out.reserve(tokens.size());
  for (std::size_t i = history; i < padded.size(); ++i) {
    out.push_back(std::log(probability_ids(std::span(padded).subspan(i - history, history), padded[i])));
  }
  return out;
}

std::string NGramModel::name() const {
  std::ostringstream os;
  os << "add-k " << order_ << "-gram (k=" << k_ << ")";
  return os.str();
}

bool NGramModel::operator==(const NGramModel& other) const {
  if (order_ != other.order_ || k_ != other.k_ || tokens_ != other.tokens_) return false;
  if (tables_.size() != other.tables_.size()) return false;
  for (auto a = tables_.begin(), b = other.tables_.begin(); a != tables_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.unseen != b->second.unseen || a->second.seen != b->second.seen) return false;
  }
  return true;
}

void NGramModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << kFormatTag << '\n';
  out << "#order\t" << order_ << '\n';
  out << "#k\t" << format_prob(k_) << '\n';
  for (const auto& t : tokens_) out << "#vocab\t" << t << '\n';

  auto token_name = [&](Id id) -> std::string_view {
    if (id == kUnknownId) return kUnknown;
    if (id == kStartId) return kStart;
    return tokens_[id - 1];
  };
  for (const auto& [key, table] : tables_) {
    std::string ctx;
    for (std::size_t i = 0; i < key.size(); i += sizeof(Id)) {
      Id id = 0;
      for (std::size_t b = 0; b < sizeof(Id); ++b) id |= static_cast<Id>(static_cast<unsigned char>(key[i + b])) << (8 * b);
      if (!ctx.empty()) ctx.push_back(' ');
      ctx += token_name(id);
    }
    std::vector<std::pair<std::string_view, double>> rows;
    for (const auto& [id, p] : table.seen) rows.emplace_back(token_name(id), p);
    std::sort(rows.begin(), rows.end());
    for (const auto& [tok, p] : rows) out << ctx << '\t' << tok << '\t' << format_prob(p) << '\n';
    out << ctx << '\t' << kUnseen << '\t' << format_prob(table.unseen) << '\n';
  }
}

NGramModel NGramModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  auto fail = [&](std::size_t line, const std::string& why) -> DataError {
    return DataError(path.string() + ": line " + std::to_string(line) + ": " + why);
  };
  std::string line;
  if (!std::getline(in, line) || line != kFormatTag) throw fail(1, "missing format tag");

  NGramModel m;
  bool have_order = false;
  bool have_k = false;
  std::size_t n = 1;
  std::vector<std::tuple<std::string, std::string, double, std::size_t>> rows;
  while (std::getline(in, line)) {
    ++n;
    const auto parts = split_tabs(line);
    if (parts.size() != 2 && parts.size() != 3) throw fail(n, "expected tab-separated fields");
    if (!line.empty() && line.front() == '#') {
      if (parts.size() != 2) throw fail(n, "malformed header");
      if (parts[0] == "#order") {
        if (std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), m.order_).ec != std::errc{} ||
            m.order_ < 1) {
          throw fail(n, "bad order");
        }
        have_order = true;
      } else if (parts[0] == "#k") {
        if (std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), m.k_).ec != std::errc{} ||
            !(m.k_ > 0)) {
          throw fail(n, "bad k");
        }
        have_k = true;
      } else if (parts[0] == "#vocab") {
        m.tokens_.emplace_back(parts[1]);
      } else {
        throw fail(n, "unknown header '" + std::string(parts[0]) + "'");
      }
      continue;
    }
    if (parts.size() != 3) throw fail(n, "expected context TAB token TAB probability");
    double p = 0;
    if (std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), p).ec != std::errc{} || !(p > 0 && p <= 1)) {
      throw fail(n, "probability must lie in (0, 1]");
    }
    rows.emplace_back(std::string(parts[0]), std::string(parts[1]), p, n);
  }
  if (!have_order || !have_k) throw fail(n, "missing #order or #k header");
  if (!std::is_sorted(m.tokens_.begin(), m.tokens_.end()) ||
      std::adjacent_find(m.tokens_.begin(), m.tokens_.end()) != m.tokens_.end()) {
    throw fail(n, "vocabulary must be sorted and unique");
  }
  for (std::size_t i = 0; i < m.tokens_.size(); ++i) m.ids_.emplace(m.tokens_[i], static_cast<Id>(i + 1));

  auto lookup = [&](std::string_view tok, std::size_t at) -> Id {
    if (tok == kUnknown) return kUnknownId;
    if (tok == kStart) return kStartId;
    const auto it = m.ids_.find(std::string(tok));
    if (it == m.ids_.end()) throw fail(at, "token '" + std::string(tok) + "' not in vocabulary");
    return it->second;
  };
  const auto history = static_cast<std::size_t>(m.order_ - 1);
  for (const auto& [ctx, tok, p, at] : rows) {
    std::vector<Id> ids;
    std::istringstream ss(ctx);
    std::string part;
    while (ss >> part) ids.push_back(lookup(part, at));
    if (ids.size() != history) throw fail(at, "context length does not match order");
    auto& table = m.tables_[m.context_key(ids)];
    if (tok == kUnseen) {
      table.unseen = p;
    } else if (!table.seen.emplace(lookup(tok, at), p).second) {
      throw fail(at, "duplicate row");
    }
  }
  const double v = static_cast<double>(m.vocab_size());
  for (const auto& [key, table] : m.tables_) {
    double mass = table.unseen * (v - static_cast<double>(table.seen.size()));
    for (const auto& [id, p] : table.seen) mass += p;
    if (!(table.unseen > 0) || std::abs(mass - 1.0) > 1e-9) {
      throw DataError(path.string() + ": a context's probabilities do not sum to 1");
    }
  }
  return m;
}

CoherenceReport coherence(const PerplexityProvider& lm, std::string_view text, std::uint64_t seed,
                          std::size_t max_sentences) {
  const auto sentences = split_sentences(text);
  if (sentences.empty()) throw PreconditionError("coherence: text has no sentences");
  if (max_sentences == 0) throw PreconditionError("coherence: max_sentences must be positive");

  std::vector<std::size_t> picked(sentences.size());
  std::iota(picked.begin(), picked.end(), 0);
  const std::size_t s = std::min(sentences.size(), max_sentences);
  if (s < sentences.size()) {
    // Partial Fisher-Yates: the first s slots are a uniform sample.
    Rng rng(seed);
    for (std::size_t i = 0; i < s; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(picked.size() - i));
      std::swap(picked[i], picked[j]);
    }
    picked.resize(s);
    std::sort(picked.begin(), picked.end());
  }

  std::vector<std::vector<std::string>> sentence_tokens;
  sentence_tokens.reserve(s);
  for (auto idx : picked) sentence_tokens.push_back(tokenize_words(sentences[idx]));

  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::string> doc;
  auto score = [&] {
    doc.clear();
    for (auto o : order) doc.insert(doc.end(), sentence_tokens[o].begin(), sentence_tokens[o].end());
    if (doc.empty()) throw PreconditionError("coherence: sampled sentences contain no word tokens");
    return perplexity(lm, doc);
  };

  CoherenceReport report;
  report.sampled_sentences = picked;
  report.original_ppl = score();
  double sum = 0.0;
  do {
    const double ppl = score();
    report.permutation_ppls.push_back(ppl);
    sum += ppl - report.original_ppl;
  } while (std::next_permutation(order.begin(), order.end()));
  report.tc = sum / static_cast<double>(report.permutation_ppls.size());
  return report;
}

}  // namespace fakerev
