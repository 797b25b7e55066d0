#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fakerev/detect.hpp"
#include "fakerev/lm.hpp"

namespace fakerev::app {

inline constexpr const char* kVersion = "0.1.0";

/// Bad command line or configuration. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings for a pipeline run. Values come from the defaults below, then
/// the JSON config file, then command-line flags.
struct RunConfig {
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";

  std::filesystem::path corpus = "data/reviews.jsonl";
  std::filesystem::path dale_chall = "data/dale_chall.txt";
  std::filesystem::path lexicon_positive = "data/lexicon/positive.txt";
  std::filesystem::path lexicon_negative = "data/lexicon/negative.txt";

  double train_fraction = 0.8;
  /// Share of the training split held out for threshold calibration.
  double validation_fraction = 0.2;

  std::string detector = "lr";    // model used by calibrate and infer: nb or lr
  std::string features = "words"; // words or bpe
  std::size_t bpe_merges = 1000;
  std::size_t folds = 5;
  std::vector<double> nb_alpha_grid = kNbAlphaGrid;
  std::vector<double> lr_lambda_grid = kLrLambdaGrid;
  LrSchedule lr_schedule;

  std::vector<double> sweep_thresholds = {0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
  /// Inference pool: non-elite reviews dated after this year.
  int cutoff_year = 2020;

  NGramOptions lm;

  std::string gen_backend = "mock";  // mock, http or replay
  std::string gen_endpoint;
  std::size_t gen_max_inflight = 4;
  std::filesystem::path gen_fixtures;

  /// Throws UsageError on inconsistent settings.
  void validate() const;
};

/// Overlays a JSON config file onto `config`. Unknown keys are errors.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Parses the command line and runs one subcommand. Returns the exit
/// status: 0 ok, 1 usage, 2 data error, 3 external-service error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fakerev::app
