#include "fakerev/stylometrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "fakerev/csv.hpp"
#include "fakerev/error.hpp"
#include "fakerev/random.hpp"
#include "fakerev/text.hpp"

namespace fakerev {
namespace {

std::string fold(std::string_view word) {
  std::string out(word);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

WordList::WordList(std::span<const std::string> words) {
  for (const auto& w : words) {
    if (!w.empty()) words_.insert(fold(w));
  }
  if (words_.empty()) throw PreconditionError("word list is empty");
}

WordList WordList::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(b, e - b + 1));
  }
  try {
    return WordList(words);
  } catch (const PreconditionError&) {
    throw DataError(path.string() + ": word list has no entries");
  }
}

bool WordList::contains(std::string_view word) const { return words_.find(word) != words_.end(); }

LexiconSentiment::LexiconSentiment(WordList positive, WordList negative, std::string source)
    : positive_(std::move(positive)), negative_(std::move(negative)), source_(std::move(source)) {
  for (const auto& w : positive_.words()) {
    if (negative_.contains(w)) throw PreconditionError("sentiment lexicon: '" + w + "' is both positive and negative");
  }
}

LexiconSentiment LexiconSentiment::load(const std::filesystem::path& positive, const std::filesystem::path& negative) {
  auto pos = WordList::load(positive);
  auto neg = WordList::load(negative);
  try {
    return LexiconSentiment(std::move(pos), std::move(neg),
                            "lexicon:" + positive.filename().string() + "+" + negative.filename().string());
  } catch (const PreconditionError& e) {
    throw DataError(e.what());
  }
}

double LexiconSentiment::score(std::string_view text) const {
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (const auto& w : tokenize_words(text)) {
    if (positive_.contains(w)) {
      ++pos;
    } else if (negative_.contains(w)) {
      ++neg;
    }
  }
  if (pos + neg == 0) return 0.0;
  return (static_cast<double>(pos) - static_cast<double>(neg)) / static_cast<double>(pos + neg);
}

LexiconSentiment LexiconSentiment::swapped() const { return LexiconSentiment(negative_, positive_, source_ + ":swapped"); }

double ari(std::string_view text) {
  const auto words = tokenize_words(text);
  const auto sentences = split_sentences(text);
  if (words.empty() || sentences.empty()) throw PreconditionError("ari: text needs at least one word and one sentence");
  std::size_t chars = 0;
  for (const auto& w : words) chars += utf8::length(w);
  const auto n_words = static_cast<double>(words.size());
  return 4.71 * (static_cast<double>(chars) / n_words) + 0.5 * (n_words / static_cast<double>(sentences.size())) - 21.43;
}

std::size_t difficult_words(std::string_view text, const WordList& familiar) {
  const auto words = tokenize_words(text);
  return static_cast<std::size_t>(
      std::count_if(words.begin(), words.end(), [&](const std::string& w) { return !familiar.contains(w); }));
}

double reading_time(std::string_view text) {
  return static_cast<double>(utf8::length(text)) * kSecondsPerCharacter;
}

double sentiment(std::string_view text, const SentimentProvider& provider) {
  return std::clamp(provider.score(text), -1.0, 1.0);
}

StyleMetricVector score_review(const Review& review, const StyleScorer& scorer) {
  StyleMetricVector v;
  const auto tokens = tokenize_words(review.text);
  if (tokens.empty()) throw PreconditionError("review '" + review.id + "': no word tokens to score");
  v.ppl = perplexity(scorer.lm, tokens);
  v.tc = coherence(scorer.lm, review.text, derive_seed(scorer.seed, review.id)).tc;
  v.ari = ari(review.text);
  v.num_difficult_words = difficult_words(review.text, scorer.familiar);
  v.rtime_seconds = reading_time(review.text);
  v.sentiment = sentiment(review.text, scorer.sentiment);
  return v;
}

std::vector<StyleMetricVector> score_reviews(const ReviewSet& set, const StyleScorer& scorer, Exec exec) {
  std::vector<StyleMetricVector> out(set.size());
  for_each_index(set.size(), exec, [&](std::size_t i) { out[i] = score_review(set[i], scorer); });
  return out;
}

void write_style_csv(std::ostream& out, const ReviewSet& set, std::span<const StyleMetricVector> rows) {
  if (rows.size() != set.size()) throw PreconditionError("write_style_csv: row count does not match review count");
  out << "id,ppl,tc,ari,dw,rtime,sentiment\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& m = rows[i];
    const std::vector<std::string> fields = {set[i].id, num(m.ppl), num(m.tc), num(m.ari),
                                             std::to_string(m.num_difficult_words), num(m.rtime_seconds),
                                             num(m.sentiment)};
    csv::write_row(out, fields);
  }
}

std::vector<StyleRow> read_style_csv(std::istream& in) {
  const auto rows = csv::read(in);
  const std::vector<std::string> header = {"id", "ppl", "tc", "ari", "dw", "rtime", "sentiment"};
  if (rows.empty() || rows.front().fields != header) {
    throw DataError("style metrics: expected header id,ppl,tc,ari,dw,rtime,sentiment");
  }
  std::vector<StyleRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != header.size()) {
      throw DataError("style metrics: line " + std::to_string(rows[i].line) + ": expected 7 fields");
    }
    auto real = [&](std::size_t k) {
      double v = 0;
      if (std::from_chars(f[k].data(), f[k].data() + f[k].size(), v).ec != std::errc{}) {
        throw DataError("style metrics: line " + std::to_string(rows[i].line) + ": field '" + header[k] +
                        "' is not a number");
      }
      return v;
    };
    StyleRow row;
    row.id = f[0];
    row.metrics.ppl = real(1);
    row.metrics.tc = real(2);
    row.metrics.ari = real(3);
    row.metrics.num_difficult_words = static_cast<std::size_t>(real(4));
    row.metrics.rtime_seconds = real(5);
    row.metrics.sentiment = real(6);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace fakerev
