#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fakerev {

/// One operating point: classify as fake when score >= threshold.
struct RocPoint {
  double threshold;
  double tpr;
  double fpr;
};

/// Points in increasing threshold order. The first threshold is the lowest
/// score (tpr = fpr = 1); the last lies just above the highest score
/// (tpr = fpr = 0).
struct RocCurve {
  std::vector<RocPoint> points;
};

/// Throws PreconditionError unless both classes are present.
RocCurve roc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct YoudenResult {
  double threshold;
  double j;
};

/// Maximises tpr - fpr; ties go to the lower threshold.
YoudenResult youden_j(const RocCurve& curve);

inline const std::vector<double> kSweepThresholds = {0.5, 0.6, 0.7, 0.8, 0.9, 0.99};

struct Calibration {
  double j_star = 0.5;
  double j_value = 0.0;
  /// The fixed thresholds followed by j_star.
  std::vector<double> sweep;

  /// Column names matching `sweep`: "0.5", ..., "0.99", "J".
  std::vector<std::string> sweep_labels() const;

  std::string to_json() const;
  static Calibration from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Calibration load(const std::filesystem::path& path);
};

/// Youden calibration on validation scores. `fixed` must be strictly
/// increasing and inside (0, 1).
Calibration calibrate(std::span<const double> scores, std::span<const std::uint8_t> labels,
                      std::span<const double> fixed = kSweepThresholds);

struct EvalReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  /// No positive predictions / no positive labels: the metric is reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
};

/// Positive class is fake (1).
EvalReport evaluate(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels);

std::vector<std::uint8_t> classify(std::span<const double> scores, double threshold);

struct SweepColumn {
  std::string label;
  double threshold;
  std::vector<std::uint8_t> flags;
  double flagged_fraction;
};

/// One column per sweep threshold, in sweep order. Throws PreconditionError
/// for scores outside [0, 1].
std::vector<SweepColumn> classify_sweep(std::span<const double> scores, const Calibration& calibration);

}  // namespace fakerev
