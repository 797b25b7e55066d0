#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fakerev {

/// Character-level byte-pair encoding.
///
/// Words are whitespace-delimited chunks split into UTF-8 code points plus a
/// trailing end-of-word marker. Training repeatedly merges the most frequent
/// adjacent symbol pair (ties go to the lexicographically smallest pair) and
/// stops once no pair occurs at least `min_pair_count` times.
class BpeModel {
 public:
  using Pair = std::pair<std::string, std::string>;

  static constexpr std::string_view kEndOfWord = "</w>";

  BpeModel() = default;
  /// Throws PreconditionError if the merges violate the model invariants.
  explicit BpeModel(std::vector<Pair> merges);

  static BpeModel train(std::span<const std::string> corpus, std::size_t num_merges,
                        std::size_t min_pair_count = 2);

  /// Subword tokens of `text`. The end-of-word marker is stripped, so
  /// concatenating the tokens of each word gives back the word.
  std::vector<std::string> encode(std::string_view text) const;

  const std::vector<Pair>& merges() const noexcept { return merges_; }
  const std::set<std::string>& base_alphabet() const noexcept { return alphabet_; }

  /// First line is a format tag, then one "left right" pair per line in
  /// merge order.
  void save(const std::filesystem::path& path) const;
  static BpeModel load(const std::filesystem::path& path);

  bool operator==(const BpeModel& other) const { return merges_ == other.merges_; }

 private:
  std::vector<std::string> encode_word(std::string_view word) const;

  std::vector<Pair> merges_;
  std::set<std::string> alphabet_;
  std::map<Pair, std::size_t> rank_;
};

/// Word tokens of `text` re-segmented into BPE subwords; the featurizer used
/// when a detector is configured for subword features.
std::vector<std::string> bpe_featurize(const BpeModel& model, std::string_view text);

}  // namespace fakerev
