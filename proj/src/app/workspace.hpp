#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fakerev/app.hpp"

namespace fakerev::app {

/// The output directory of a run and its manifest. Artifacts are addressed
/// by file name; each records the command that produced it.
class Workspace {
 public:
  Workspace(std::filesystem::path dir, std::uint64_t seed);

  std::filesystem::path path(const std::string& artifact) const { return dir_ / artifact; }

  /// Path of an upstream artifact; throws DataError naming `producer` if it
  /// has not been written yet.
  std::filesystem::path require(const std::string& artifact, const std::string& producer) const;

  /// Adds or replaces the manifest line for `artifact`.
  void record(const std::string& artifact, const std::string& command, const std::vector<std::string>& inputs);

 private:
  void save_manifest() const;

  std::filesystem::path dir_;
  std::uint64_t seed_;
  std::map<std::string, std::string> manifest_;
};

/// fnv1a64 of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

struct CommandOptions {
  std::filesystem::path input;      // ingest
  std::filesystem::path humans;     // survey build
  std::filesystem::path fakes;      // survey build
  std::filesystem::path form;       // survey score
  std::filesystem::path responses;  // survey score
};

void cmd_ingest(const RunConfig& config, const CommandOptions& options, std::ostream& out);
void cmd_generate(const RunConfig& config, std::ostream& out);
void cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_calibrate(const RunConfig& config, std::ostream& out);
void cmd_infer(const RunConfig& config, std::ostream& out);
void cmd_metrics(const RunConfig& config, std::ostream& out);
void cmd_analyze(const RunConfig& config, std::ostream& out);
void cmd_survey_build(const RunConfig& config, const CommandOptions& options, std::ostream& out);
void cmd_survey_score(const RunConfig& config, const CommandOptions& options, std::ostream& out);

}  // namespace fakerev::app
