#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fakerev {

enum class Label { real, fake, unknown };

std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

/// One review with the reviewer, restaurant, and foot-traffic covariates.
///
/// `norm_visits` is stored already multiplied by 1000 (visits per mille of
/// state-wide traffic); ingestion does not rescale it.
struct Review {
  std::string id;
  std::string text;
  std::string date;  // ISO-8601 calendar date, YYYY-MM-DD
  int rating = 0;
  bool elite = false;
  std::int64_t num_friends = 0;
  std::int64_t num_user_reviews = 0;
  std::int64_t num_user_photos = 0;
  std::string restaurant_id;
  std::string restaurant_name;
  double avg_rating = 0.0;
  int price_level = 0;
  std::int64_t num_rest_reviews = 0;
  std::int64_t num_visits = 0;
  double norm_visits = 0.0;
  Label label = Label::unknown;

  int year() const;

  bool operator==(const Review&) const = default;
};

/// Throws DataError naming the record id if an invariant does not hold.
void validate(const Review& review);

/// Immutable, id-unique, ordered collection of reviews.
class ReviewSet {
 public:
  ReviewSet() = default;
  /// Throws DataError on a duplicate id.
  explicit ReviewSet(std::vector<Review> reviews, std::string provenance = {});

  const std::vector<Review>& reviews() const noexcept { return reviews_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return reviews_.size(); }
  bool empty() const noexcept { return reviews_.empty(); }
  const Review& operator[](std::size_t i) const { return reviews_[i]; }
  auto begin() const noexcept { return reviews_.begin(); }
  auto end() const noexcept { return reviews_.end(); }

 private:
  std::vector<Review> reviews_;
  std::string provenance_;
};

enum class Format { jsonl, csv };

/// Column order shared by the JSONL keys and the CSV header.
const std::vector<std::string>& review_fields();

std::optional<Format> format_from_path(const std::filesystem::path& path);

ReviewSet load_reviews(const std::filesystem::path& path, Format format);
void save_reviews(const std::filesystem::path& path, const ReviewSet& set, Format format);

/// Serialises one review as a single JSONL line (no trailing newline).
std::string to_jsonl(const Review& review);
/// Parses one JSONL line; `line` is used for error messages only.
Review parse_jsonl(std::string_view text, std::size_t line);

/// Non-elite reviews dated strictly after `cutoff_year`.
ReviewSet filter_inference_pool(const ReviewSet& set, int cutoff_year);

enum class Stratify { none, by_label };

/// Seeded partition into (train, rest). Train holds round(fraction * N)
/// reviews (per label when stratified). Both parts keep the input order.
std::pair<ReviewSet, ReviewSet> split(const ReviewSet& set, double train_fraction,
                                      std::uint64_t seed, Stratify stratify = Stratify::none);

/// Case-folded, whitespace-trimmed restaurant name.
std::string normalize_restaurant_name(std::string_view name);

/// Normalized name -> chain flag. A name is a chain when it is attached to
/// more than five distinct restaurant ids.
using ChainMap = std::map<std::string, bool>;
ChainMap chain_status(const ReviewSet& set);
bool is_chain(const ChainMap& chains, std::string_view restaurant_name);

}  // namespace fakerev
