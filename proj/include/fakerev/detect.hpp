#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fakerev/parallel.hpp"
#include "fakerev/text.hpp"

namespace fakerev {

/// Class labels as bytes: 1 = fake (the positive class), 0 = real.
using Labels = std::vector<std::uint8_t>;

enum class DetectorKind { naive_bayes, logistic_regression };

/// Multinomial naive Bayes. Index 0 is the real class, 1 the fake class.
struct NaiveBayesParams {
  double alpha = 1.0;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;
};

/// Full-batch gradient descent settings. The step starts at `step` and is
/// halved whenever a step would raise the loss; training stops when the
/// gradient norm drops below `tolerance` or after `max_iterations`.
struct LrSchedule {
  double step = 0.1;
  double tolerance = 1e-6;
  std::size_t max_iterations = 10'000;
  /// Throw ConvergenceError instead of returning an unconverged model.
  bool strict = false;
};

struct LogisticParams {
  double lambda = 0.0;
  LrSchedule schedule;
  std::vector<double> weights;
  double bias = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  double final_step = 0.0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double gradient_norm)
      : std::runtime_error(what), gradient_norm_(gradient_norm) {}
  double gradient_norm() const noexcept { return gradient_norm_; }

 private:
  double gradient_norm_;
};

/// A trained bag-of-words classifier. Scores are P(fake | document).
class DetectorModel {
 public:
  DetectorModel(NaiveBayesParams params, std::uint64_t vocab_fingerprint, std::string features = "words");
  DetectorModel(LogisticParams params, std::uint64_t vocab_fingerprint, std::string features = "words");

  DetectorKind kind() const noexcept;
  std::size_t n_terms() const noexcept;
  std::uint64_t vocab_fingerprint() const noexcept { return vocab_fingerprint_; }
  /// "words" or "bpe": which featurizer produced the training matrix.
  const std::string& features() const noexcept { return features_; }

  const NaiveBayesParams* naive_bayes() const noexcept { return std::get_if<NaiveBayesParams>(&params_); }
  const LogisticParams* logistic() const noexcept { return std::get_if<LogisticParams>(&params_); }

  double score(std::span<const TermCount> row) const;
  std::vector<double> score_all(const DocTermMatrix& matrix, Exec exec = Exec::parallel) const;

  /// Versioned text: a header (kind, features, hyperparameters, vocabulary
  /// fingerprint) followed by one parameter row per term.
  void save(const std::filesystem::path& path) const;
  static DetectorModel load(const std::filesystem::path& path);

  /// Throws DataError if `vocab` is not the vocabulary the model was trained on.
  void check_vocabulary(const Vocabulary& vocab) const;

 private:
  std::variant<NaiveBayesParams, LogisticParams> params_;
  std::uint64_t vocab_fingerprint_;
  std::string features_;
};

std::string_view to_string(DetectorKind kind) noexcept;

/// Add-alpha multinomial naive Bayes. Throws PreconditionError when alpha <= 0
/// or only one class is present.
DetectorModel train_nb(const DocTermMatrix& x, std::span<const std::uint8_t> y, double alpha,
                       std::uint64_t vocab_fingerprint = 0);

/// Mean logistic loss plus (lambda / 2) * ||w||^2, and its gradient. The
/// bias is not penalised.
struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
};

/// Serial reference walks the rows in order. The parallel path sums fixed
/// row blocks in block order, so its result is independent of the thread
/// count and matches the reference to rounding.
LossGradient logistic_loss_gradient(const DocTermMatrix& x, std::span<const std::uint8_t> y,
                                    std::span<const double> w, double b, double lambda, Exec exec);

double logistic_loss(const DocTermMatrix& x, std::span<const std::uint8_t> y, std::span<const double> w, double b,
                     double lambda, Exec exec);

/// L2-regularised logistic regression fitted by full-batch gradient descent.
DetectorModel train_lr(const DocTermMatrix& x, std::span<const std::uint8_t> y, double lambda,
                       const LrSchedule& schedule = {}, std::uint64_t vocab_fingerprint = 0,
                       Exec exec = Exec::parallel);

using Trainer = std::function<DetectorModel(const DocTermMatrix&, std::span<const std::uint8_t>, double)>;

struct CvResult {
  double best = 0.0;
  std::vector<double> candidates;
  /// Mean validation accuracy per candidate over the folds that ran.
  std::vector<double> mean_accuracy;
  std::vector<std::size_t> folds_used;
  std::vector<std::string> warnings;
};

/// Exhaustive grid search with k seeded folds. Accuracy uses the 0.5
/// threshold; ties go to the smaller hyperparameter. A fold whose training
/// part holds a single class is skipped and reported in `warnings`.
/// Candidate/fold jobs run in parallel; each job trains serially.
CvResult cross_validate(const DocTermMatrix& x, std::span<const std::uint8_t> y, std::span<const double> grid,
                        std::size_t k, std::uint64_t seed, const Trainer& trainer, Exec exec = Exec::parallel);

/// Hyperparameter grids searched by default.
inline const std::vector<double> kNbAlphaGrid = {0.001, 0.01, 0.1, 1, 10, 100};
inline const std::vector<double> kLrLambdaGrid = {0.001, 0.01, 0.1, 1, 10, 100};

}  // namespace fakerev
