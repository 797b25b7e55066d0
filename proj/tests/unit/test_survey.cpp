#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "../support/survey_fixture.hpp"
#include "fakerev/error.hpp"
#include "fakerev/survey.hpp"
#include "fakerev/synthetic.hpp"
#include "helpers.hpp"

using namespace fakerev;

namespace {

const SurveyForm& form() {
  static const SurveyForm f = [] {
    const auto pools = synthetic::survey_pools(11, 60);
    return build_survey(pools.humans, pools.fakes, 11);
  }();
  return f;
}

std::vector<SurveyResponse> parse(const std::string& csv) {
  std::istringstream in(csv);
  return read_responses(in);
}

std::string all_answers(char (*pick)(const SurveyPair&), int respondents = 3) {
  std::string out = "respondent_id,question_id,choice\n";
  for (int r = 0; r < respondents; ++r) {
    for (const auto& q : form().questions) {
      const std::string choice = q.attention_check ? std::string(1, q.expected) : std::string(1, pick(q));
      out += "u" + std::to_string(r) + "," + q.question_id + "," + (choice == "-" ? "abstain" : choice) + "\n";
    }
  }
  return out;
}

}  // namespace

TEST_CASE("form has ten pairs per category inside the length windows") {
  const auto& f = form();
  REQUIRE(f.questions.size() == 40);
  CHECK(f.training.size() == kTrainingPairs);
  std::map<SurveyCategory, int> counts;
  std::set<std::string> used;
  int checks = 0;
  for (const auto* list : {&f.questions, &f.training}) {
    for (const auto& q : *list) {
      const auto gap = q.human_words > q.ai_words ? q.human_words - q.ai_words : q.ai_words - q.human_words;
      CHECK(gap <= kMaxWordGap);
      CHECK(q.human_words == word_count(q.ai_position == 'A' ? q.text_b : q.text_a));
      const bool is_long = q.category == SurveyCategory::same_long || q.category == SurveyCategory::different_long;
      if (list == &f.training) {
        CHECK(q.human_words >= kShortMin);
        CHECK(q.human_words <= kLongMax);
      } else if (is_long) {
        CHECK(q.human_words > kLongThreshold);
        CHECK(q.human_words <= kLongMax);
      } else {
        CHECK(q.human_words >= kShortMin);
        CHECK(q.human_words < kLongThreshold);
      }
      CHECK(used.insert(q.human_id).second);
      CHECK(used.insert(q.ai_id).second);
    }
  }
  for (const auto& q : f.questions) {
    ++counts[q.category];
    checks += q.attention_check;
    if (q.attention_check) CHECK(q.instruction.find(std::string("option ") + q.expected) != std::string::npos);
  }
  for (auto c : kSurveyCategories) CHECK(counts[c] == 10);
  CHECK(checks == 2);
}

TEST_CASE("form building is deterministic and serialisable") {
  const auto pools = synthetic::survey_pools(11, 60);
  CHECK(build_survey(pools.humans, pools.fakes, 11).to_json() == form().to_json());
  CHECK(SurveyForm::from_json(form().to_json()).to_json() == form().to_json());
}

TEST_CASE("no long reviews is a stratum shortfall") {
  std::vector<Review> h, a;
  Rng rng(1);
  for (int i = 0; i < 80; ++i) {
    synthetic::TextOptions o;
    o.words = 110;
    auto r = testing::review("h" + std::to_string(i), synthetic::review_text(rng, o));
    r.restaurant_id = r.restaurant_name = "place" + std::to_string(i % 20);
    h.push_back(r);
    o.voice = synthetic::Voice::ai;
    r.id = "a" + std::to_string(i);
    r.text = synthetic::review_text(rng, o);
    r.label = Label::fake;
    a.push_back(r);
  }
  try {
    build_survey(ReviewSet(h), ReviewSet(a), 1);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("Same-Long") != std::string::npos);
  }
}

TEST_CASE("perfect and abstaining respondents") {
  const auto right = score_survey(form(), parse(all_answers([](const SurveyPair& q) { return q.ai_position; })));
  REQUIRE(right.overall_accuracy);
  CHECK(*right.overall_accuracy == 1.0);
  CHECK(right.abstention_rate == 0.0);

  const auto none = score_survey(form(), parse(all_answers([](const SurveyPair&) { return '-'; })));
  CHECK_FALSE(none.overall_accuracy);
  CHECK(none.abstention_rate == 1.0);
  CHECK_FALSE(none.tukey);
}

TEST_CASE("fixture with a known accuracy") {
  const auto score = score_survey(form(), parse(fixture::survey_responses(form())));
  CHECK(score.respondents == 90);
  CHECK(score.respondents_dropped == 10);
  CHECK(score.responses == 3040);
  CHECK(score.abstained == 339);
  REQUIRE(score.overall_accuracy);
  CHECK(std::fabs(*score.overall_accuracy - 0.5713) < 1e-4);
  REQUIRE(score.tukey);
  CHECK(score.tukey->pairs.size() == 6);
}

TEST_CASE("respondent order does not matter") {
  auto responses = parse(fixture::survey_responses(form()));
  const auto a = score_survey(form(), responses);
  std::reverse(responses.begin(), responses.end());
  const auto b = score_survey(form(), responses);
  CHECK(*a.overall_accuracy == *b.overall_accuracy);
  CHECK(a.respondent_accuracy_std == b.respondent_accuracy_std);
  for (std::size_t i = 0; i < 6; ++i) CHECK(a.tukey->pairs[i].q == b.tukey->pairs[i].q);
}

TEST_CASE("malformed responses") {
  CHECK_THROWS_AS(parse("respondent_id,question_id,choice\nu1,q01,maybe\n"), DataError);
  CHECK_THROWS_AS(parse("who,what\n"), DataError);
  CHECK_THROWS_AS(score_survey(form(), parse("respondent_id,question_id,choice\nu1,q99,A\n")), DataError);
}
