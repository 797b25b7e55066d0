#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fakerev/corpus.hpp"
#include "fakerev/random.hpp"

namespace fakerev::synthetic {

/// Writing register of a generated text. The two registers share most of
/// their vocabulary but differ in phrasing, so bag-of-words detectors can
/// separate them imperfectly.
enum class Voice { human, ai };

struct TextOptions {
  Voice voice = Voice::human;
  /// Probability that a sentiment-bearing slot takes a positive word.
  double positive_share = 0.7;
  /// Target number of word tokens; the result lands on it exactly.
  std::size_t words = 80;
  std::string restaurant_name = "the restaurant";
};

/// Restaurant review text built from templated sentences. Sentiment words
/// come only from the slots; the rest of the vocabulary is lexicon-neutral.
std::string review_text(Rng& rng, const TextOptions& options);

/// Words used outside sentiment slots (for lexicon-neutrality checks).
std::vector<std::string> neutral_vocabulary();
std::vector<std::string> positive_words();
std::vector<std::string> negative_words();

/// Reviews drawn from two topic word distributions over a shared common
/// vocabulary: topic 0 is labeled real, topic 1 fake, alternating.
ReviewSet two_topic_corpus(std::uint64_t seed, std::size_t n);

/// Scripted visit narratives whose sentences always appear in the same
/// order, so a language model trained on them prefers the original order.
std::vector<std::string> ordered_language_corpus(std::uint64_t seed, std::size_t n);

struct PoolOptions {
  std::size_t n_human = 4000;
  std::size_t n_ai = 1000;
  double rating_shift = 0.4;
  double friends_shift = -5.0;
  /// Shift of the expected lexicon sentiment score.
  double sentiment_shift = 0.2;
};

/// An inference pool (non-elite, 2021-2022, label unknown) in which the
/// AI-voiced reviews carry the planted covariate shifts. Price level is a
/// placebo drawn identically for both groups. `planted[i]` marks AI reviews.
struct PlantedPool {
  ReviewSet reviews;
  std::vector<std::uint8_t> planted;
};
PlantedPool planted_pool(std::uint64_t seed, const PoolOptions& options = {});

/// Labeled training reviews in both voices (real = human, fake = AI) with
/// the same sentiment settings as planted_pool.
ReviewSet voiced_training_set(std::uint64_t seed, std::size_t n_per_class, const PoolOptions& options = {});

/// The bundled demo corpus: elite reviews (label real, 2015-2020) that seed
/// generation, and non-elite reviews (label unknown, 2019-2022), some of
/// them AI-voiced with shifted covariates. Several restaurant names are
/// chains spread over more than five ids.
ReviewSet bundled_corpus(std::uint64_t seed, std::size_t n_elite, std::size_t n_non_elite);

/// Human and AI reviews sized for survey construction: every restaurant has
/// a long and a short human review, each with a same-restaurant AI review
/// within a few words of it.
struct SurveyPools {
  ReviewSet humans;
  ReviewSet fakes;
};
SurveyPools survey_pools(std::uint64_t seed, std::size_t n_restaurants);

}  // namespace fakerev::synthetic
