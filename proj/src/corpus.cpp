#include "fakerev/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "fakerev/csv.hpp"
#include "fakerev/error.hpp"
#include "fakerev/random.hpp"

namespace fakerev {
namespace {

using ordered_json = nlohmann::ordered_json;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool valid_iso_date(std::string_view d) {
  if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (d[i] < '0' || d[i] > '9') return false;
  }
  int y = 0;
  unsigned m = 0;
  unsigned day = 0;
  std::from_chars(d.data(), d.data() + 4, y);
  std::from_chars(d.data() + 5, d.data() + 7, m);
  std::from_chars(d.data() + 8, d.data() + 10, day);
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{day}}.ok();
}

[[noreturn]] void field_error(std::size_t line, std::string_view field, std::string_view why) {
  std::ostringstream os;
  os << "line " << line << ": field '" << field << "': " << why;
  throw DataError(os.str());
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Field accessors shared by both readers. JSON values come in typed; CSV
// values arrive as text and are converted with the same range rules.
struct FieldReader {
  std::size_t line;

  std::string str(const ordered_json& j, const char* key) const {
    const auto& v = j.at(key);
    if (!v.is_string()) field_error(line, key, "expected a string");
    return v.get<std::string>();
  }
  std::int64_t integer(const ordered_json& j, const char* key) const {
    const auto& v = j.at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    field_error(line, key, "expected an integer");
  }
  double real(const ordered_json& j, const char* key) const {
    const auto& v = j.at(key);
    if (!v.is_number()) field_error(line, key, "expected a number");
    return v.get<double>();
  }
  bool boolean(const ordered_json& j, const char* key) const {
    const auto& v = j.at(key);
    if (!v.is_boolean()) field_error(line, key, "expected true or false");
    return v.get<bool>();
  }

  std::int64_t integer_text(std::string_view s, const char* key) const {
    std::int64_t v = 0;
    const auto t = trim(s);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) field_error(line, key, "expected an integer");
    return v;
  }
  double real_text(std::string_view s, const char* key) const {
    double v = 0;
    const auto t = trim(s);
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size() || !std::isfinite(v)) {
      field_error(line, key, "expected a number");
    }
    return v;
  }
  bool boolean_text(std::string_view s, const char* key) const {
    const auto t = trim(s);
    if (t == "true") return true;
    if (t == "false") return false;
    field_error(line, key, "expected true or false");
  }
};

void check_field_types(const Review& r, std::size_t line) {
  if (!valid_iso_date(r.date)) field_error(line, "date", "expected an ISO-8601 date YYYY-MM-DD");
}

int narrow_int(std::int64_t v, std::size_t line, const char* key) {
  if (v < INT32_MIN || v > INT32_MAX) field_error(line, key, "integer out of range");
  return static_cast<int>(v);
}

}  // namespace

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::real:
      return "real";
    case Label::fake:
      return "fake";
    case Label::unknown:
      break;
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "real") return Label::real;
  if (text == "fake") return Label::fake;
  if (text == "unknown") return Label::unknown;
  return std::nullopt;
}

int Review::year() const {
  int y = 0;
  if (date.size() < 4 || std::from_chars(date.data(), date.data() + 4, y).ec != std::errc{}) {
    throw DataError("review " + id + ": unparseable date '" + date + "'");
  }
  return y;
}

void validate(const Review& r) {
  auto fail = [&](const std::string& why) { throw DataError("review '" + r.id + "': " + why); };
  if (r.id.empty()) throw DataError("review with empty id");
  if (trim(r.text).empty()) fail("text is empty");
  if (!valid_iso_date(r.date)) fail("date '" + r.date + "' is not YYYY-MM-DD");
  if (r.rating < 1 || r.rating > 5) fail("rating " + std::to_string(r.rating) + " outside 1..5");
  if (!(r.avg_rating >= 1.0 && r.avg_rating <= 5.0)) fail("avg_rating " + format_double(r.avg_rating) + " outside 1.0..5.0");
  if (r.price_level < 1 || r.price_level > 4) fail("price_level " + std::to_string(r.price_level) + " outside 1..4");
  if (r.num_friends < 0) fail("num_friends is negative");
  if (r.num_user_reviews < 0) fail("num_user_reviews is negative");
  if (r.num_user_photos < 0) fail("num_user_photos is negative");
  if (r.num_rest_reviews < 0) fail("num_rest_reviews is negative");
  if (r.num_visits < 0) fail("num_visits is negative");
  if (!(r.norm_visits >= 0.0) || !std::isfinite(r.norm_visits)) fail("norm_visits must be a finite value >= 0");
  if (r.restaurant_id.empty()) fail("restaurant_id is empty");
  if (trim(r.restaurant_name).empty()) fail("restaurant_name is empty");
}

ReviewSet::ReviewSet(std::vector<Review> reviews, std::string provenance)
    : reviews_(std::move(reviews)), provenance_(std::move(provenance)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(reviews_.size());
  for (const auto& r : reviews_) {
    if (!seen.insert(r.id).second) throw DataError("duplicate review id '" + r.id + "'");
  }
}

const std::vector<std::string>& review_fields() {
  static const std::vector<std::string> fields = {
      "id",           "text",      "date",          "rating",           "elite",      "num_friends",
      "num_user_reviews", "num_user_photos", "restaurant_id", "restaurant_name", "avg_rating", "price_level",
      "num_rest_reviews", "num_visits", "norm_visits",   "label"};
  return fields;
}

std::optional<Format> format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".jsonl" || ext == ".json") return Format::jsonl;
  if (ext == ".csv") return Format::csv;
  return std::nullopt;
}

std::string to_jsonl(const Review& r) {
  ordered_json j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["date"] = r.date;
  j["rating"] = r.rating;
  j["elite"] = r.elite;
  j["num_friends"] = r.num_friends;
  j["num_user_reviews"] = r.num_user_reviews;
  j["num_user_photos"] = r.num_user_photos;
  j["restaurant_id"] = r.restaurant_id;
  j["restaurant_name"] = r.restaurant_name;
  j["avg_rating"] = r.avg_rating;
  j["price_level"] = r.price_level;
  j["num_rest_reviews"] = r.num_rest_reviews;
  j["num_visits"] = r.num_visits;
  j["norm_visits"] = r.norm_visits;
  j["label"] = std::string(to_string(r.label));
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

Review parse_jsonl(std::string_view text, std::size_t line) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::ostringstream os;
    os << "line " << line << ": invalid JSON: " << e.what();
    throw DataError(os.str());
  }
  if (!j.is_object()) throw DataError("line " + std::to_string(line) + ": expected a JSON object");
  const auto& fields = review_fields();
  for (const auto& f : fields) {
    if (!j.contains(f)) field_error(line, f, "missing");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(fields.begin(), fields.end(), it.key()) == fields.end()) {
      field_error(line, it.key(), "unknown key");
    }
  }
  const FieldReader rd{line};
  Review r;
  r.id = rd.str(j, "id");
  r.text = rd.str(j, "text");
  r.date = rd.str(j, "date");
  r.rating = narrow_int(rd.integer(j, "rating"), line, "rating");
  r.elite = rd.boolean(j, "elite");
  r.num_friends = rd.integer(j, "num_friends");
  r.num_user_reviews = rd.integer(j, "num_user_reviews");
  r.num_user_photos = rd.integer(j, "num_user_photos");
  r.restaurant_id = rd.str(j, "restaurant_id");
  r.restaurant_name = rd.str(j, "restaurant_name");
  r.avg_rating = rd.real(j, "avg_rating");
  r.price_level = narrow_int(rd.integer(j, "price_level"), line, "price_level");
  r.num_rest_reviews = rd.integer(j, "num_rest_reviews");
  r.num_visits = rd.integer(j, "num_visits");
  r.norm_visits = rd.real(j, "norm_visits");
  const auto label = parse_label(rd.str(j, "label"));
  if (!label) field_error(line, "label", "expected one of real, fake, unknown");
  r.label = *label;
  check_field_types(r, line);
  return r;
}

namespace {

std::vector<Review> read_jsonl(std::istream& in) {
  std::vector<Review> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (trim(text).empty()) continue;
    out.push_back(parse_jsonl(text, line));
    validate(out.back());
  }
  return out;
}

std::vector<Review> read_csv_reviews(std::istream& in) {
  const auto rows = csv::read(in);
  std::vector<Review> out;
  if (rows.empty()) return out;
  const auto& fields = review_fields();
  if (rows.front().fields != fields) {
    throw DataError("line 1: CSV header must be exactly: id,text,...,label (" + std::to_string(fields.size()) +
                    " columns)");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto& f = row.fields;
    const FieldReader rd{row.line};
    if (f.size() != fields.size()) {
      std::ostringstream os;
      os << "line " << row.line << ": expected " << fields.size() << " fields, found " << f.size();
      throw DataError(os.str());
    }
    Review r;
    r.id = f[0];
    r.text = f[1];
    r.date = f[2];
    r.rating = narrow_int(rd.integer_text(f[3], "rating"), row.line, "rating");
    r.elite = rd.boolean_text(f[4], "elite");
    r.num_friends = rd.integer_text(f[5], "num_friends");
    r.num_user_reviews = rd.integer_text(f[6], "num_user_reviews");
    r.num_user_photos = rd.integer_text(f[7], "num_user_photos");
    r.restaurant_id = f[8];
    r.restaurant_name = f[9];
    r.avg_rating = rd.real_text(f[10], "avg_rating");
    r.price_level = narrow_int(rd.integer_text(f[11], "price_level"), row.line, "price_level");
    r.num_rest_reviews = rd.integer_text(f[12], "num_rest_reviews");
    r.num_visits = rd.integer_text(f[13], "num_visits");
    r.norm_visits = rd.real_text(f[14], "norm_visits");
    const auto label = parse_label(trim(f[15]));
    if (!label) field_error(row.line, "label", "expected one of real, fake, unknown");
    r.label = *label;
    check_field_types(r, row.line);
    validate(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ReviewSet load_reviews(const std::filesystem::path& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  auto reviews = format == Format::jsonl ? read_jsonl(in) : read_csv_reviews(in);
  return ReviewSet(std::move(reviews), path.filename().string());
}

void save_reviews(const std::filesystem::path& path, const ReviewSet& set, Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  if (format == Format::jsonl) {
    for (const auto& r : set) out << to_jsonl(r) << '\n';
    return;
  }
  csv::write_row(out, review_fields());
  for (const auto& r : set) {
    const std::vector<std::string> row = {r.id,
                                          r.text,
                                          r.date,
                                          std::to_string(r.rating),
                                          r.elite ? "true" : "false",
                                          std::to_string(r.num_friends),
                                          std::to_string(r.num_user_reviews),
                                          std::to_string(r.num_user_photos),
                                          r.restaurant_id,
                                          r.restaurant_name,
                                          format_double(r.avg_rating),
                                          std::to_string(r.price_level),
                                          std::to_string(r.num_rest_reviews),
                                          std::to_string(r.num_visits),
                                          format_double(r.norm_visits),
                                          std::string(to_string(r.label))};
    csv::write_row(out, row);
  }
}

ReviewSet filter_inference_pool(const ReviewSet& set, int cutoff_year) {
  std::vector<Review> kept;
  for (const auto& r : set) {
    if (!r.elite && r.year() > cutoff_year) kept.push_back(r);
  }
  return ReviewSet(std::move(kept), set.provenance());
}

std::pair<ReviewSet, ReviewSet> split(const ReviewSet& set, double train_fraction, std::uint64_t seed,
                                      Stratify stratify) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw PreconditionError("split: train_fraction must lie strictly between 0 and 1");
  }
  Rng rng(seed);
  std::vector<char> in_train(set.size(), 0);

  auto take = [&](std::vector<std::size_t> idx) {
    rng.shuffle(std::span(idx));
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = 1;
  };

  if (stratify == Stratify::none) {
    std::vector<std::size_t> idx(set.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    take(std::move(idx));
  } else {
    for (Label label : {Label::real, Label::fake, Label::unknown}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i].label == label) idx.push_back(i);
      }
      take(std::move(idx));
    }
  }

  std::vector<Review> train;
  std::vector<Review> rest;
  for (std::size_t i = 0; i < set.size(); ++i) (in_train[i] ? train : rest).push_back(set[i]);
  return {ReviewSet(std::move(train), set.provenance()), ReviewSet(std::move(rest), set.provenance())};
}

std::string normalize_restaurant_name(std::string_view name) {
  std::string out(trim(name));
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

ChainMap chain_status(const ReviewSet& set) {
  std::map<std::string, std::set<std::string>> ids_by_name;
  for (const auto& r : set) ids_by_name[normalize_restaurant_name(r.restaurant_name)].insert(r.restaurant_id);
  ChainMap out;
  for (const auto& [name, ids] : ids_by_name) out.emplace(name, ids.size() > 5);
  return out;
}

bool is_chain(const ChainMap& chains, std::string_view restaurant_name) {
  const auto it = chains.find(normalize_restaurant_name(restaurant_name));
  return it != chains.end() && it->second;
}

}  // namespace fakerev
