#include <doctest.h>

#include <cmath>

#include "fakerev/error.hpp"
#include "fakerev/lm.hpp"
#include "fakerev/stylometrics.hpp"
#include "fakerev/text.hpp"
#include "helpers.hpp"

using namespace fakerev;
using Strings = std::vector<std::string>;

namespace {

LexiconSentiment small_lexicon() {
  return LexiconSentiment(WordList(Strings{"good", "great", "tasty"}), WordList(Strings{"bad", "bland"}));
}

}  // namespace

TEST_CASE("automated readability index") {
  CHECK(ari("The cat sat on the mat.") == doctest::Approx(4.71 * 17 / 6 + 0.5 * 6 - 21.43).epsilon(1e-15));
  CHECK(std::fabs(ari("The cat sat on the mat.") - -5.085) < 1e-9);
  // 20 words of 5 characters in one sentence.
  std::string text;
  for (int i = 0; i < 20; ++i) text += "abcde ";
  text += ".";
  CHECK(std::fabs(ari(text) - 12.12) < 1e-9);
  CHECK_THROWS_AS(ari(""), PreconditionError);
  // Punctuation that changes no counts leaves the index alone.
  CHECK(ari("The cat, sat on the mat.") == ari("The cat sat on the mat."));
}

TEST_CASE("difficult words") {
  const WordList familiar(Strings{"the", "cat", "sat"});
  CHECK(difficult_words("The cat sat", familiar) == 0);
  CHECK(difficult_words("zebra quokka", familiar) == 2);
  CHECK(difficult_words("the sesquipedalian", familiar) == 1);
  CHECK(difficult_words("the cat sat sesquipedalian", familiar) == difficult_words("the cat sat", familiar) + 1);
}

TEST_CASE("reading time") {
  CHECK(reading_time(std::string(100, 'x')) == doctest::Approx(1.469).epsilon(1e-15));
  CHECK(reading_time("") == 0.0);
  CHECK(reading_time(std::string(1000, 'x')) == doctest::Approx(14.69).epsilon(1e-15));
  const std::string a = "Hello there. ";
  const std::string b = "Caf\xC3\xA9 time!";
  CHECK(reading_time(a + b) == doctest::Approx(reading_time(a) + reading_time(b)).epsilon(1e-15));
  CHECK(reading_time("\xC3\xA9") == doctest::Approx(kSecondsPerCharacter).epsilon(1e-15));
}

TEST_CASE("lexicon sentiment") {
  const auto lex = small_lexicon();
  CHECK(sentiment("good great tasty", lex) == 1.0);
  CHECK(sentiment("the table", lex) == 0.0);
  CHECK(sentiment("good great but bland", lex) == doctest::Approx(1.0 / 3));
  const auto swapped = lex.swapped();
  for (const char* t : {"good great but bland", "bad bad good", "good"}) CHECK(sentiment(t, swapped) == -sentiment(t, lex));
  CHECK_THROWS_AS(LexiconSentiment(WordList(Strings{"good"}), WordList(Strings{"good"})), PreconditionError);
}

TEST_CASE("bundled word lists load") {
  const auto dale = WordList::load(FAKEREV_DATA_DIR "/dale_chall.txt");
  CHECK(dale.size() > 2900);
  CHECK(dale.contains("the"));
  const auto lex = LexiconSentiment::load(FAKEREV_DATA_DIR "/lexicon/positive.txt", FAKEREV_DATA_DIR "/lexicon/negative.txt");
  CHECK(sentiment("delicious", lex) == 1.0);
  CHECK(sentiment("awful", lex) == -1.0);
}

TEST_CASE("style vector composition") {
  const auto lm = NGramModel::train(std::vector<Strings>{{"good", "great", "good"}});
  const WordList familiar(Strings{"good", "great"});
  const auto lex = small_lexicon();
  const StyleScorer scorer{lm, familiar, lex, 9};
  const auto r = testing::review("x", "Good great good.");
  const auto v = score_review(r, scorer);
  CHECK(v == score_review(r, scorer));
  CHECK(v.tc == 0.0);
  CHECK(v.sentiment == 1.0);
  CHECK(v.num_difficult_words == 0);
  CHECK(v.rtime_seconds == reading_time(r.text));

  std::vector<Review> many;
  for (int i = 0; i < 40; ++i) many.push_back(testing::review("r" + std::to_string(i), "Good food. Bad great service. Good."));
  const ReviewSet set(many);
  CHECK(score_reviews(set, scorer, Exec::serial) == score_reviews(set, scorer, Exec::parallel));
}

TEST_CASE("style csv round trip") {
  const auto lm = NGramModel::train(std::vector<Strings>{{"a", "b"}});
  const WordList familiar(Strings{"a"});
  const auto lex = small_lexicon();
  const ReviewSet set({testing::review("p", "A b. B a good."), testing::review("q", "Bad.")});
  const auto rows = score_reviews(set, {lm, familiar, lex, 1});
  std::stringstream s;
  write_style_csv(s, set, rows);
  const auto back = read_style_csv(s);
  REQUIRE(back.size() == 2);
  CHECK(back[1].id == "q");
  CHECK(back[0].metrics.num_difficult_words == rows[0].num_difficult_words);
  CHECK(back[0].metrics.ari == doctest::Approx(rows[0].ari).epsilon(1e-9));
  std::stringstream bad("id,x\n");
  CHECK_THROWS_AS(read_style_csv(bad), DataError);
}
