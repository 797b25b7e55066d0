#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fakerev/calibration.hpp"
#include "fakerev/corpus.hpp"
#include "fakerev/parallel.hpp"
#include "fakerev/stylometrics.hpp"

namespace fakerev {

struct AnovaResult {
  std::vector<double> group_means;
  std::vector<std::size_t> group_sizes;
  double grand_mean = 0.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double f = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p = 1.0;
  /// Zero within-group variance with unequal means: f is +inf and p is 0.
  bool infinite_f = false;
};

/// Throws PreconditionError unless there are >= 2 groups, none empty, and
/// more observations than groups.
AnovaResult anova_oneway(std::span<const std::vector<double>> groups);

enum class Significance { none, p05, p01, p001 };

/// "", "*", "**", "***".
std::string_view stars(Significance s) noexcept;
Significance significance_of(double p) noexcept;

struct LabeledSample {
  std::string name;
  std::vector<double> values;
};

struct TukeyPair {
  std::string group_a;
  std::string group_b;
  /// mean_a - mean_b.
  double mean_diff = 0.0;
  double q = 0.0;
  double p = 1.0;
  Significance level = Significance::none;
};

struct TukeyResult {
  /// Every unordered pair (a before b in input order).
  std::vector<TukeyPair> pairs;
  double ms_within = 0.0;
  int df_within = 0;
  /// MS_within is zero; q is +inf for any nonzero difference.
  bool degenerate = false;

  /// Signed difference mean_a - mean_b for any two group names.
  double mean_diff(std::string_view a, std::string_view b) const;
};

/// Tukey-Kramer HSD: q = |mean_a - mean_b| / sqrt(MS_within / 2 * (1/n_a + 1/n_b)),
/// p from the studentized range with k groups and N - k df. `level` is the
/// smallest alpha in `alphas` with p < alpha.
TukeyResult tukey_hsd(std::span<const LabeledSample> groups,
                      std::span<const double> alphas = std::vector<double>{0.05, 0.01, 0.001});

void write_tukey_csv(std::ostream& out, const TukeyResult& result);

struct MeanCi {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Student-t interval for the mean; needs at least two values.
MeanCi mean_ci(std::span<const double> values, double level = 0.95);

/// The review, user, restaurant, and writing variables compared between
/// predicted-human and predicted-AI reviews, one column per variable.
struct VariableTable {
  std::vector<std::string> names;
  std::vector<std::string> categories;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
};

/// Builds the 16 standard variables. ChainStatus is 1 for chains, 0 otherwise.
VariableTable build_variable_table(const ReviewSet& set, std::span<const StyleMetricVector> style,
                                   const ChainMap& chains);

struct SensitivityRow {
  std::string threshold_label;
  double threshold = 0.0;
  std::string variable;
  std::string category;
  std::size_t n_human = 0;
  std::size_t n_ai = 0;
  double mean_human = 0.0;
  double mean_ai = 0.0;
  /// False when either group is empty or too small for an F test.
  bool computable = false;
  AnovaResult anova;
  double flagged_fraction = 0.0;
};

struct SensitivityTable {
  std::vector<SensitivityRow> rows;  // threshold-major, variables in table order
  std::vector<std::string> variables;
  std::vector<std::string> categories;
  std::vector<std::string> threshold_labels;
  std::vector<double> thresholds;
  std::vector<double> flagged_fraction;
  std::vector<std::size_t> flagged_count;
  std::size_t total = 0;

  const SensitivityRow& at(std::size_t threshold, std::size_t variable) const {
    return rows[threshold * variables.size() + variable];
  }
};

/// Compares predicted-human (flag 0) with predicted-AI (flag 1) reviews for
/// every variable at every sweep threshold.
SensitivityTable sensitivity(const VariableTable& vars, std::span<const SweepColumn> sweep,
                             Exec exec = Exec::parallel);

/// CSV: threshold,variable,mean_human,mean_ai,f,p,stars,flagged_fraction.
void write_sensitivity_csv(std::ostream& out, const SensitivityTable& table);

/// Plain-text tables, one block per threshold: Name, Category, Human, AI,
/// F-statistic with stars.
void write_sensitivity_text(std::ostream& out, const SensitivityTable& table);

/// Writes per-figure CSVs into `dir` and returns their paths:
/// flagged_fraction.csv and sensitivity_{review_user,restaurant,writing}.csv
/// (group means with 95% confidence intervals per threshold).
std::vector<std::filesystem::path> write_figure_csvs(const std::filesystem::path& dir, const SensitivityTable& table,
                                                     const VariableTable& vars, std::span<const SweepColumn> sweep);

}  // namespace fakerev
