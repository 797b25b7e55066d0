#include "fakerev/genclient.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <regex>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "fakerev/error.hpp"
#include "fakerev/text.hpp"

namespace fakerev {
namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

const std::unordered_map<std::string_view, std::string_view>& synonyms() {
  static const std::unordered_map<std::string_view, std::string_view> map = {
      {"good", "great"},        {"great", "wonderful"},   {"nice", "lovely"},      {"tasty", "delicious"},
      {"delicious", "flavorful"}, {"food", "cuisine"},    {"place", "spot"},       {"staff", "team"},
      {"friendly", "welcoming"}, {"bad", "disappointing"}, {"ok", "decent"},       {"okay", "decent"},
      {"really", "truly"},      {"very", "incredibly"},   {"amazing", "fantastic"}, {"love", "adore"},
      {"loved", "adored"},      {"small", "cozy"},        {"price", "cost"},       {"prices", "costs"},
      {"meal", "dish"},         {"restaurant", "eatery"}, {"service", "hospitality"}, {"fresh", "crisp"},
      {"quick", "prompt"},      {"slow", "unhurried"},    {"huge", "generous"},    {"pretty", "quite"},
      {"enjoyed", "relished"},  {"best", "finest"},       {"waiter", "server"},    {"tables", "seats"},
  };
  return map;
}

const char* const kOpeners[] = {
    "I recently visited {name}.",
    "{name} truly impressed me.",
    "What a delightful experience at {name}.",
    "My visit to {name} was memorable.",
};
const char* const kShortOpeners[] = {"Delightful.", "Wonderful visit.", "Impressive."};
const char* const kClosers[] = {
    "Highly recommend!",
    "I will definitely be back.",
    "Overall, a wonderful experience.",
    "Five stars from me.",
};

std::string fill_name(std::string_view pattern, std::string_view name) {
  std::string out(pattern);
  const auto pos = out.find("{name}");
  if (pos != std::string::npos) out.replace(pos, 6, name);
  return out;
}

std::string substitute_words(std::string_view sentence, Rng& rng, double rate) {
  std::string out;
  std::size_t i = 0;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  while (i < sentence.size()) {
    if (!alpha(sentence[i])) {
      out.push_back(sentence[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < sentence.size() && alpha(sentence[j])) ++j;
    const auto word = sentence.substr(i, j - i);
    std::string lower(word);
    for (auto& c : lower) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    const auto it = synonyms().find(lower);
    // A following digit or non-ASCII byte would glue onto the word, so only
    // substitute whole tokens.
    const bool whole = j == sentence.size() || static_cast<unsigned char>(sentence[j]) < 0x80;
    const bool glued_digit = j < sentence.size() && sentence[j] >= '0' && sentence[j] <= '9';
    if (it != synonyms().end() && whole && !glued_digit && rng.unit() < rate) {
      std::string repl(it->second);
      if (word[0] >= 'A' && word[0] <= 'Z') repl[0] = static_cast<char>(repl[0] - 'a' + 'A');
      out += repl;
    } else {
      out.append(word);
    }
    i = j;
  }
  return out;
}

bool ends_with_terminator(std::string_view s) {
  return !s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?');
}

}  // namespace

std::string_view to_string(ModelChoice m) noexcept { return m == ModelChoice::model_a ? "model_a" : "model_b"; }

GenParams sample_gen_params(Rng& rng) {
  GenParams p;
  p.model = rng.coin() ? ModelChoice::model_b : ModelChoice::model_a;
  p.temperature = rng.uniform(kMinTemperature, kMaxTemperature);
  return p;
}

std::string build_prompt(std::string_view restaurant_name, std::string_view elite_text) {
  if (blank(restaurant_name)) throw PreconditionError("build_prompt: restaurant name is empty");
  if (blank(elite_text)) throw PreconditionError("build_prompt: review text is empty");
  std::string out = "Write a restaurant review based on these notes:\nName: ";
  out.append(restaurant_name);
  out.push_back('\n');
  out.append(elite_text);
  return out;
}

void GenRequest::validate() const {
  if (blank(restaurant_name)) throw PreconditionError("generation request: restaurant name is empty");
  if (blank(seed_review_text)) throw PreconditionError("generation request: seed review is empty");
  if (!(temperature >= kMinTemperature && temperature <= kMaxTemperature)) {
    throw PreconditionError("generation request: temperature outside [0.3, 0.7]");
  }
}

std::uint64_t GenRequest::hash() const {
  char temp[40];
  std::snprintf(temp, sizeof temp, "%.17g", temperature);
  std::uint64_t h = fnv1a64(restaurant_name);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(seed_review_text, h);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(to_string(model), h);
  h = fnv1a64("\x1f", h);
  return fnv1a64(temp, h);
}

std::string MockBackend::generate(const GenRequest& request) {
  request.validate();
  Rng rng(request.hash() ^ static_cast<std::uint64_t>(kVersion));
  auto sentences = split_sentences(request.seed_review_text);
  const std::size_t n = tokenize_words(request.seed_review_text).size();
  const std::size_t rotate = static_cast<std::size_t>(rng.below(sentences.size()));
  std::rotate(sentences.begin(), sentences.begin() + static_cast<std::ptrdiff_t>(rotate), sentences.end());

  std::size_t budget = n / 2;
  std::string opener;
  const std::string named = fill_name(kOpeners[rng.below(std::size(kOpeners))], request.restaurant_name);
  const std::string plain = kShortOpeners[rng.below(std::size(kShortOpeners))];
  for (const auto& candidate : {named, plain}) {
    const auto words = tokenize_words(candidate).size();
    if (words <= budget) {
      opener = candidate;
      budget -= words;
      break;
    }
  }
  const std::string closer_pick = kClosers[rng.below(std::size(kClosers))];
  std::string closer;
  if (tokenize_words(closer_pick).size() <= budget) closer = closer_pick;

  const double rate = 0.4 + request.temperature;
  std::string out = opener;
  for (const auto& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += substitute_words(s, rng, rate);
    if (!ends_with_terminator(out)) out.push_back('.');
  }
  if (!closer.empty()) out += " " + closer;
  return out;
}

HttpBackend::HttpBackend(HttpOptions options) : options_(std::move(options)) {
  if (options_.api_key.empty()) throw AuthError("http backend: GEN_API_KEY is not set");
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(options_.endpoint, m, url)) {
    throw PreconditionError("http backend: endpoint must be an http(s) URL, got '" + options_.endpoint + "'");
  }
  host_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
  if (options_.max_retries < 0) throw PreconditionError("http backend: max_retries must be >= 0");
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

HttpBackend HttpBackend::from_env(std::string endpoint) {
  HttpOptions o;
  o.endpoint = std::move(endpoint);
  if (const char* key = std::getenv("GEN_API_KEY")) o.api_key = key;
  return HttpBackend(std::move(o));
}

std::string HttpBackend::generate(const GenRequest& request) {
  request.validate();
  nlohmann::ordered_json body;
  body["model"] = request.model == ModelChoice::model_a ? options_.model_a_name : options_.model_b_name;
  body["prompt"] = request.prompt();
  body["temperature"] = request.temperature;
  const std::string payload = body.dump();
  const httplib::Headers headers = {{"Authorization", "Bearer " + options_.api_key}};

  for (int attempt = 0;; ++attempt) {
    ++attempts_;
    httplib::Client client(host_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    const auto res = client.Post(path_, headers, payload, "application/json");
    int status = 0;
    std::string why;
    std::chrono::milliseconds retry_after{0};
    if (!res) {
      why = "connection failed: " + httplib::to_string(res.error());
    } else {
      status = res->status;
      if (status == 200) {
        try {
          const auto j = nlohmann::json::parse(res->body);
          std::string text;
          if (j.contains("text")) {
            text = j.at("text").get<std::string>();
          } else {
            text = j.at("choices").at(0).at("text").get<std::string>();
          }
          if (blank(text)) throw ServiceError("generation service returned empty text", status, false);
          return text;
        } catch (const nlohmann::json::exception& e) {
          throw ServiceError(std::string("generation service: malformed response: ") + e.what(), status, false);
        }
      }
      if (status == 401 || status == 403) throw AuthError("generation service rejected the credential (HTTP " + std::to_string(status) + ")");
      why = "HTTP " + std::to_string(status);
      if (res->has_header("Retry-After")) {
        const auto value = res->get_header_value("Retry-After");
        char* end = nullptr;
        const long secs = std::strtol(value.c_str(), &end, 10);
        if (end != value.c_str() && secs > 0) retry_after = std::chrono::seconds(secs);
      }
    }
    const bool retriable = status == 0 || status == 429 || status >= 500;
    if (!retriable || attempt >= options_.max_retries) {
      throw ServiceError("generation service: " + why + " after " + std::to_string(attempt + 1) + " attempt(s)", status,
                         retriable);
    }
    const std::chrono::milliseconds backoff = options_.base_delay * (1 << attempt);
    options_.sleep(std::max(backoff, retry_after));
  }
}

ReplayBackend ReplayBackend::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::map<std::uint64_t, std::string> responses;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (blank(line)) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto key = j.at("request_hash").get<std::string>();
      std::uint64_t h = 0;
      if (key.size() != 16 || std::sscanf(key.c_str(), "%16llx", reinterpret_cast<unsigned long long*>(&h)) != 1) {
        throw DataError("bad request_hash");
      }
      responses[h] = j.at("text").get<std::string>();
    } catch (const std::exception& e) {
      throw DataError(path.string() + ": line " + std::to_string(n) + ": " + e.what());
    }
  }
  return ReplayBackend(std::move(responses));
}

void ReplayBackend::record(const std::filesystem::path& path, std::span<const GenRequest> requests, GenBackend& backend) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (const auto& r : requests) {
    nlohmann::ordered_json j;
    j["request_hash"] = hex64(r.hash());
    j["text"] = backend.generate(r);
    out << j.dump() << '\n';
  }
}

std::string ReplayBackend::generate(const GenRequest& request) {
  request.validate();
  const auto it = responses_.find(request.hash());
  if (it == responses_.end()) {
    throw ServiceError("replay: no recorded response for request " + hex64(request.hash()), 404, false);
  }
  return it->second;
}

std::vector<std::string> generate_batch(std::span<const GenRequest> requests, GenBackend& backend,
                                        std::size_t max_inflight) {
  if (max_inflight == 0) throw PreconditionError("generate_batch: max_inflight must be >= 1");
  for (const auto& r : requests) r.validate();
  std::vector<std::string> out(requests.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed) return;
      const std::size_t i = next++;
      if (i >= requests.size()) return;
      try {
        out[i] = backend.generate(requests[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  const std::size_t n_threads = std::min(max_inflight, requests.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  if (n_threads > 0) worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

ReviewSet generate_fakes(const ReviewSet& seeds, GenBackend& backend, std::uint64_t seed, std::size_t max_inflight) {
  std::vector<GenRequest> requests;
  requests.reserve(seeds.size());
  for (const auto& r : seeds.reviews()) {
    Rng rng(derive_seed(seed, r.id));
    const auto params = sample_gen_params(rng);
    requests.push_back({r.restaurant_name, r.text, params.model, params.temperature});
  }
  const auto texts = generate_batch(requests, backend, max_inflight);
  std::vector<Review> out;
  out.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    Review g = seeds[i];
    g.id = "gen-" + g.id;
    g.text = texts[i];
    g.label = Label::fake;
    out.push_back(std::move(g));
  }
  return ReviewSet(std::move(out), "generated:" + backend.name());
}

std::unique_ptr<GenBackend> make_backend(std::string_view kind, const std::string& endpoint,
                                         const std::filesystem::path& fixtures) {
  if (kind == "mock") return std::make_unique<MockBackend>();
  if (kind == "http") {
    HttpOptions o;
    o.endpoint = endpoint;
    if (const char* key = std::getenv("GEN_API_KEY")) o.api_key = key;
    return std::make_unique<HttpBackend>(std::move(o));
  }
  if (kind == "replay") {
    if (fixtures.empty()) throw PreconditionError("replay backend needs a fixture file");
    return std::make_unique<ReplayBackend>(ReplayBackend::load(fixtures));
  }
  throw PreconditionError("unknown generation backend '" + std::string(kind) + "' (expected mock, http or replay)");
}

}  // namespace fakerev
