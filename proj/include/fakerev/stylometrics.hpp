#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fakerev/corpus.hpp"
#include "fakerev/lm.hpp"
#include "fakerev/parallel.hpp"

namespace fakerev {

/// Case-folded word set, e.g. the Dale-Chall list of familiar words.
class WordList {
 public:
  /// Throws PreconditionError if no words remain after case-folding.
  explicit WordList(std::span<const std::string> words);

  /// One token per line; blank lines and lines starting with '#' are skipped.
  static WordList load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const noexcept { return words_; }

 private:
  std::set<std::string, std::less<>> words_;
};

/// Scores text polarity on [-1, 1].
class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual double score(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

/// (positive matches - negative matches) / (positive + negative matches),
/// counted over word tokens; 0 when nothing matches.
class LexiconSentiment final : public SentimentProvider {
 public:
  /// Throws PreconditionError if either list is empty or they overlap.
  LexiconSentiment(WordList positive, WordList negative, std::string source = "lexicon");

  static LexiconSentiment load(const std::filesystem::path& positive, const std::filesystem::path& negative);

  double score(std::string_view text) const override;
  std::string name() const override { return source_; }

  /// The same lexicon with the polarities exchanged.
  LexiconSentiment swapped() const;

 private:
  WordList positive_;
  WordList negative_;
  std::string source_;
};

/// Automated Readability Index:
/// 4.71 * chars/words + 0.5 * words/sentences - 21.43, where chars counts
/// the code points inside word tokens. Throws PreconditionError when the
/// text has no words or no sentences.
double ari(std::string_view text);

/// Word tokens absent from the familiar-word list.
std::size_t difficult_words(std::string_view text, const WordList& familiar);

/// Seconds to read the text at 14.69 ms per character. Every code point of
/// the raw text counts, whitespace included.
double reading_time(std::string_view text);

inline constexpr double kSecondsPerCharacter = 14.69e-3;

double sentiment(std::string_view text, const SentimentProvider& provider);

struct StyleMetricVector {
  double ppl = 0.0;
  double tc = 0.0;
  double ari = 0.0;
  std::size_t num_difficult_words = 0;
  double rtime_seconds = 0.0;
  double sentiment = 0.0;

  bool operator==(const StyleMetricVector&) const = default;
};

struct StyleScorer {
  const PerplexityProvider& lm;
  const WordList& familiar;
  const SentimentProvider& sentiment;
  /// Combined with each review id to seed the shuffle-test sentence sample.
  std::uint64_t seed = 0;
};

StyleMetricVector score_review(const Review& review, const StyleScorer& scorer);

/// Scores every review; row i belongs to set[i].
std::vector<StyleMetricVector> score_reviews(const ReviewSet& set, const StyleScorer& scorer,
                                             Exec exec = Exec::parallel);

/// CSV with header id,ppl,tc,ari,dw,rtime,sentiment.
void write_style_csv(std::ostream& out, const ReviewSet& set, std::span<const StyleMetricVector> rows);

struct StyleRow {
  std::string id;
  StyleMetricVector metrics;
};
std::vector<StyleRow> read_style_csv(std::istream& in);

}  // namespace fakerev
