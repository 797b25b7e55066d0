#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fakerev/corpus.hpp"
#include "fakerev/stats.hpp"

namespace fakerev {

enum class SurveyCategory { same_long, same_short, different_long, different_short };

inline constexpr std::array<SurveyCategory, 4> kSurveyCategories = {
    SurveyCategory::same_long, SurveyCategory::same_short, SurveyCategory::different_long,
    SurveyCategory::different_short};

/// "Same-Long", "Same-Short", "Different-Long", "Different-Short".
std::string_view to_string(SurveyCategory c) noexcept;
std::optional<SurveyCategory> parse_category(std::string_view text) noexcept;

/// Word counts use tokenize_words. Long: 140 < words <= 180; short:
/// 100 <= words < 140. The AI review may differ by at most 30 words.
inline constexpr std::size_t kShortMin = 100;
inline constexpr std::size_t kLongThreshold = 140;
inline constexpr std::size_t kLongMax = 180;
inline constexpr std::size_t kMaxWordGap = 30;
inline constexpr std::size_t kPairsPerCategory = 10;
inline constexpr std::size_t kTrainingPairs = 15;
inline constexpr std::size_t kAttentionChecks = 2;

std::size_t word_count(std::string_view text);

struct SurveyPair {
  std::string question_id;
  SurveyCategory category = SurveyCategory::same_long;
  std::string human_id;
  std::string ai_id;
  std::string text_a;
  std::string text_b;
  /// Position of the AI review, which is the correct answer: 'A' or 'B'.
  char ai_position = 'A';
  std::size_t human_words = 0;
  std::size_t ai_words = 0;
  /// Attention checks carry an instruction naming the required answer.
  bool attention_check = false;
  std::string instruction;
  char expected = 'A';
};

struct SurveyForm {
  std::uint64_t seed = 0;
  std::vector<SurveyPair> training;
  /// 40 questions in presentation order, two of them attention checks.
  std::vector<SurveyPair> questions;

  const SurveyPair* find(std::string_view question_id) const;

  std::string to_json() const;
  static SurveyForm from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static SurveyForm load(const std::filesystem::path& path);
};

/// Pairs human reviews with comparable AI reviews, 10 per category plus 15
/// training pairs, with no review used twice. Deterministic in `seed`.
/// Throws DataError naming the stratum and its shortfall when candidates
/// run out.
SurveyForm build_survey(const ReviewSet& humans, const ReviewSet& fakes, std::uint64_t seed);

enum class Choice { a, b, abstain };

struct SurveyResponse {
  std::string respondent_id;
  std::string question_id;
  Choice choice = Choice::abstain;
};

/// CSV with header respondent_id,question_id,choice; choice is A, B or
/// abstain. Throws DataError with the line number on malformed rows.
std::vector<SurveyResponse> read_responses(std::istream& in);

struct CategoryScore {
  SurveyCategory category;
  std::size_t answered = 0;
  std::size_t correct = 0;
  std::size_t abstained = 0;
  /// correct / answered; nullopt when nothing was answered.
  std::optional<double> accuracy;
};

struct SurveyScore {
  std::size_t respondents = 0;
  std::size_t respondents_dropped = 0;
  std::size_t responses = 0;  // scored (non-check) responses of kept respondents
  std::size_t answered = 0;
  std::size_t correct = 0;
  std::size_t abstained = 0;
  /// correct / answered over all kept respondents; nullopt if all abstained.
  std::optional<double> overall_accuracy;
  double abstention_rate = 0.0;
  /// Spread of per-respondent accuracy and abstention rate.
  double respondent_accuracy_mean = 0.0;
  double respondent_accuracy_std = 0.0;
  double respondent_abstention_mean = 0.0;
  double respondent_abstention_std = 0.0;
  std::array<CategoryScore, 4> categories{};
  /// Per-respondent category accuracy (%) compared across categories.
  std::optional<TukeyResult> tukey;
  std::vector<std::string> notes;
};

/// Drops respondents who miss either attention check, then scores the
/// remaining answers; abstentions are excluded from accuracy denominators.
SurveyScore score_survey(const SurveyForm& form, const std::vector<SurveyResponse>& responses);

/// Summary lines plus the pairwise Tukey table.
void write_survey_report(std::ostream& out, const SurveyScore& score);

}  // namespace fakerev
