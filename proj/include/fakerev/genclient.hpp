#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fakerev/corpus.hpp"
#include "fakerev/random.hpp"

namespace fakerev {

/// The two generation models, picked with equal probability per request.
enum class ModelChoice { model_a, model_b };

std::string_view to_string(ModelChoice m) noexcept;

inline constexpr double kMinTemperature = 0.3;
inline constexpr double kMaxTemperature = 0.7;

struct GenParams {
  ModelChoice model = ModelChoice::model_a;
  double temperature = 0.5;
};

/// Model by fair coin, temperature uniform on [0.3, 0.7].
GenParams sample_gen_params(Rng& rng);

/// "Write a restaurant review based on these notes:\nName: <name>\n<text>".
/// Throws PreconditionError if either input is blank.
std::string build_prompt(std::string_view restaurant_name, std::string_view elite_text);

struct GenRequest {
  std::string restaurant_name;
  std::string seed_review_text;
  ModelChoice model = ModelChoice::model_a;
  double temperature = 0.5;

  /// Throws PreconditionError on blank fields or a temperature out of range.
  void validate() const;
  std::string prompt() const { return build_prompt(restaurant_name, seed_review_text); }
  /// Stable hash of every field; keys mock output and recorded fixtures.
  std::uint64_t hash() const;
};

class GenBackend {
 public:
  virtual ~GenBackend() = default;
  /// Must be safe to call from several threads at once.
  virtual std::string generate(const GenRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Offline stand-in: a deterministic paraphrase of the seed review
/// (word substitutions, rotated sentence order, a short opener and closer),
/// keyed by the request hash. Output word count stays within [n, 1.5n] of
/// the seed's n words.
class MockBackend final : public GenBackend {
 public:
  static constexpr int kVersion = 1;
  std::string generate(const GenRequest& request) override;
  std::string name() const override { return "mock-v" + std::to_string(kVersion); }
};

struct HttpOptions {
  /// Full URL, e.g. http://127.0.0.1:8080/v1/generate.
  std::string endpoint;
  std::string api_key;
  /// Retries after the first attempt for 429, 5xx and connection failures.
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  std::chrono::seconds timeout{60};
  std::string model_a_name = "model_a";
  std::string model_b_name = "model_b";
  /// Replaces the real sleep between attempts (tests).
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// POSTs {"model", "prompt", "temperature"} as JSON with a bearer token and
/// accepts {"text": ...} or {"choices": [{"text": ...}]}.
class HttpBackend final : public GenBackend {
 public:
  /// Throws AuthError for an empty key, PreconditionError for a bad URL.
  explicit HttpBackend(HttpOptions options);

  /// Reads the key from GEN_API_KEY.
  static HttpBackend from_env(std::string endpoint);

  std::string generate(const GenRequest& request) override;
  std::string name() const override { return "http:" + options_.endpoint; }

  /// Attempts made so far, across all requests.
  std::size_t attempts() const noexcept { return attempts_; }

 private:
  HttpOptions options_;
  std::string host_;
  std::string path_;
  std::atomic<std::size_t> attempts_{0};
};

/// Serves recorded responses keyed by request hash. Fixture files are JSON
/// lines {"request_hash": "<16 hex>", "text": "..."}.
class ReplayBackend final : public GenBackend {
 public:
  explicit ReplayBackend(std::map<std::uint64_t, std::string> responses) : responses_(std::move(responses)) {}
  static ReplayBackend load(const std::filesystem::path& path);
  /// Writes fixtures for `requests` produced by `backend`.
  static void record(const std::filesystem::path& path, std::span<const GenRequest> requests, GenBackend& backend);

  /// Throws ServiceError (status 404, not retriable) for an unrecorded request.
  std::string generate(const GenRequest& request) override;
  std::string name() const override { return "replay"; }

 private:
  std::map<std::uint64_t, std::string> responses_;
};

/// Runs up to `max_inflight` requests at a time; output i answers request i.
/// The first failure is rethrown after in-flight requests finish.
std::vector<std::string> generate_batch(std::span<const GenRequest> requests, GenBackend& backend,
                                        std::size_t max_inflight);

/// One fake review per seed review. Request parameters come from a stream
/// seeded by (seed, review id). The result copies each seed's covariates,
/// takes id "gen-<seed id>", and is labeled fake.
ReviewSet generate_fakes(const ReviewSet& seeds, GenBackend& backend, std::uint64_t seed, std::size_t max_inflight);

std::unique_ptr<GenBackend> make_backend(std::string_view kind, const std::string& endpoint,
                                         const std::filesystem::path& fixtures = {});

}  // namespace fakerev
