// Response file with a known share of correct answers: 90 respondents, of
// whom 10 miss an attention check; the 80 kept answer 38 scored questions
// each, abstaining 339 times and answering 1543 of the other 2701 correctly
// (57.13%).
#pragma once

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fakerev/survey.hpp"

namespace fixture {

inline constexpr int kRespondents = 90;
inline constexpr int kInattentive = 10;
inline constexpr int kAbstain = 339;
inline constexpr int kCorrect = 1543;
inline constexpr double kAccuracy = 1543.0 / 2701.0;

inline std::string survey_responses(const fakerev::SurveyForm& form, unsigned seed = 2023) {
  std::vector<const fakerev::SurveyPair*> scored, checks;
  for (const auto& q : form.questions) (q.attention_check ? checks : scored).push_back(&q);
  const int kept = kRespondents - kInattentive;
  const auto cells = static_cast<int>(kept * scored.size());

  // Cell outcome: 0 abstain, 1 correct, 2 wrong, assigned to a shuffled order.
  std::vector<int> outcome(cells, 2);
  std::fill(outcome.begin(), outcome.begin() + kAbstain, 0);
  std::fill(outcome.begin() + kAbstain, outcome.begin() + kAbstain + kCorrect, 1);
  std::mt19937 gen(seed);
  std::shuffle(outcome.begin(), outcome.end(), gen);

  auto other = [](char c) { return c == 'A' ? 'B' : 'A'; };
  std::string out = "respondent_id,question_id,choice\n";
  char id[16];
  for (int r = 0; r < kRespondents; ++r) {
    std::snprintf(id, sizeof id, "p%02d", r + 1);
    const bool attentive = r < kept;
    for (std::size_t c = 0; c < checks.size(); ++c) {
      const char pick = attentive ? checks[c]->expected : other(checks[c]->expected);
      out += std::string(id) + "," + checks[c]->question_id + "," + pick + "\n";
    }
    for (std::size_t q = 0; q < scored.size(); ++q) {
      const int o = attentive ? outcome[r * scored.size() + q] : static_cast<int>(gen() % 3);
      const std::string pick =
          o == 0 ? "abstain" : std::string(1, o == 1 ? scored[q]->ai_position : other(scored[q]->ai_position));
      out += std::string(id) + "," + scored[q]->question_id + "," + pick + "\n";
    }
  }
  return out;
}

}  // namespace fixture
