#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fakerev {

/// Source of per-token conditional log-probabilities. Perplexity and the
/// shuffle test only need this contract, so any language model can stand
/// behind it.
class PerplexityProvider {
 public:
  virtual ~PerplexityProvider() = default;

  /// Natural-log probability of each token given the tokens before it.
  virtual std::vector<double> token_log_probs(std::span<const std::string> tokens) const = 0;

  virtual std::string name() const = 0;
};

/// exp of the mean negative log-probability. Throws PreconditionError on an
/// empty sequence.
double perplexity(const PerplexityProvider& lm, std::span<const std::string> tokens);

struct NGramOptions {
  int order = 3;
  double k = 0.1;
  /// Tokens seen fewer times than this are folded into the unknown token.
  std::size_t min_count = 1;
  /// When set, only these tokens are modelled; everything else is unknown.
  std::optional<std::vector<std::string>> vocabulary;
};

/// Add-k smoothed n-gram model.
///
/// Every document is left-padded with order-1 start symbols. The predicted
/// vocabulary is the modelled tokens plus one reserved unknown token, and
/// p(w | ctx) = (c(ctx, w) + k) / (c(ctx) + k V), so every probability is
/// positive and each context's distribution sums to one.
class NGramModel final : public PerplexityProvider {
 public:
  static constexpr std::string_view kUnknown = "<unk>";
  static constexpr std::string_view kStart = "<s>";

  /// Throws PreconditionError on an empty corpus, order < 1 or k <= 0.
  static NGramModel train(std::span<const std::vector<std::string>> corpus, const NGramOptions& options = {});

  std::vector<double> token_log_probs(std::span<const std::string> tokens) const override;
  std::string name() const override;

  /// p(token | context); only the last order-1 context tokens are used and
  /// shorter contexts are padded with start symbols.
  double probability(std::span<const std::string> context, std::string_view token) const;

  int order() const noexcept { return order_; }
  double k() const noexcept { return k_; }
  /// Modelled tokens plus the unknown token.
  std::size_t vocab_size() const noexcept { return tokens_.size() + 1; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t context_count() const noexcept { return tables_.size(); }

  /// Line-oriented table: '#'-prefixed header lines (format tag, order, k,
  /// vocabulary), then one "context TAB token TAB probability" row per
  /// observed continuation plus a "<unseen>" row per context holding the
  /// probability of every continuation not listed.
  void save(const std::filesystem::path& path) const;
  static NGramModel load(const std::filesystem::path& path);

  bool operator==(const NGramModel& other) const;

 private:
  using Id = std::uint32_t;
  static constexpr Id kUnknownId = 0;
  static constexpr Id kStartId = UINT32_MAX;

  struct ContextTable {
    double unseen = 0.0;
    std::unordered_map<Id, double> seen;
  };

  Id id_of(std::string_view token) const;
  std::string context_key(std::span<const Id> context) const;
  double probability_ids(std::span<const Id> context, Id token) const;

  int order_ = 1;
  double k_ = 1.0;
  std::vector<std::string> tokens_;  // id - 1 -> token, sorted
  std::unordered_map<std::string, Id> ids_;
  // Key: context ids packed little-endian into a string.
  std::map<std::string, ContextTable> tables_;
};

struct CoherenceReport {
  double original_ppl = 0.0;
  /// One entry per ordering of the sampled sentences, identity first.
  std::vector<double> permutation_ppls;
  /// Mean of (permutation ppl - original ppl), identity included.
  double tc = 0.0;
  /// Indices of the sampled sentences in original order.
  std::vector<std::size_t> sampled_sentences;
};

/// Zero-shot shuffle test. Samples min(n, max_sentences) of the text's n
/// sentences without replacement (seeded), scores every ordering of them and
/// averages the perplexity change against their original relative order.
CoherenceReport coherence(const PerplexityProvider& lm, std::string_view text, std::uint64_t seed,
                          std::size_t max_sentences = 5);

}  // namespace fakerev
