#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <json.hpp>
#include <thread>

#include "fakerev/error.hpp"
#include "fakerev/genclient.hpp"
#include "fakerev/survey.hpp"
#include "fakerev/synthetic.hpp"
#include "helpers.hpp"

using namespace fakerev;

namespace {

GenRequest request(std::string text = "The soup was bland. The bread was warm and fresh. Service was quick.") {
  GenRequest r;
  r.restaurant_name = "Noona Noodles";
  r.seed_review_text = std::move(text);
  r.model = ModelChoice::model_b;
  r.temperature = 0.42;
  return r;
}

// Local HTTP server on an ephemeral port; the handler decides each reply.
class Server {
 public:
  explicit Server(httplib::Server::Handler handler) {
    server_.Post("/gen", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Server() {
    server_.stop();
    thread_.join();
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/gen"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

HttpOptions options(const std::string& endpoint, std::vector<std::chrono::milliseconds>* sleeps = nullptr) {
  HttpOptions o;
  o.endpoint = endpoint;
  o.api_key = "test-key";
  o.base_delay = std::chrono::milliseconds(10);
  o.timeout = std::chrono::seconds(5);
  o.sleep = [sleeps](std::chrono::milliseconds d) {
    if (sleeps) sleeps->push_back(d);
  };
  return o;
}

}  // namespace

TEST_CASE("prompt template") {
  CHECK(build_prompt("Noona Noodles", "Soup was bland.") ==
        "Write a restaurant review based on these notes:\nName: Noona Noodles\nSoup was bland.");
  CHECK(build_prompt("A", "b") == build_prompt("A", "b"));
  CHECK_THROWS_AS(build_prompt("", "text"), PreconditionError);
  CHECK_THROWS_AS(build_prompt("A", "  "), PreconditionError);
}

TEST_CASE("generation parameter sampling") {
  Rng rng(1);
  std::size_t model_a = 0;
  for (int i = 0; i < 10000; ++i) model_a += sample_gen_params(rng).model == ModelChoice::model_a;
  CHECK(std::fabs(model_a / 10000.0 - 0.5) < 0.02);

  Rng fuzz(2);
  bool in_range = true;
  for (int i = 0; i < 1000000; ++i) {
    const double t = sample_gen_params(fuzz).temperature;
    in_range = in_range && t >= kMinTemperature && t <= kMaxTemperature;
  }
  CHECK(in_range);

  Rng a(9), b(9);
  for (int i = 0; i < 50; ++i) {
    const auto x = sample_gen_params(a), y = sample_gen_params(b);
    CHECK(x.model == y.model);
    CHECK(x.temperature == y.temperature);
  }
}

TEST_CASE("request validation and hashing") {
  auto r = request();
  CHECK_NOTHROW(r.validate());
  auto other = r;
  other.temperature = 0.43;
  CHECK(r.hash() != other.hash());
  other = r;
  other.model = ModelChoice::model_a;
  CHECK(r.hash() != other.hash());
  r.temperature = 0.8;
  CHECK_THROWS_AS(r.validate(), PreconditionError);
}

TEST_CASE("mock backend is a pure function of the request") {
  MockBackend m;
  const auto r = request();
  CHECK(m.generate(r) == m.generate(r));
  CHECK(MockBackend().generate(r) == m.generate(r));
  auto r2 = r;
  r2.temperature = 0.6;
  CHECK(m.generate(r2) != m.generate(r));
}

TEST_CASE("mock output length stays within half of the seed") {
  Rng rng(3);
  MockBackend m;
  for (int i = 0; i < 200; ++i) {
    synthetic::TextOptions o;
    o.words = 20 + rng.below(150);
    o.voice = i % 2 ? synthetic::Voice::ai : synthetic::Voice::human;
    auto r = request(synthetic::review_text(rng, o));
    r.temperature = kMinTemperature + rng.unit() * (kMaxTemperature - kMinTemperature);
    const auto n = word_count(r.seed_review_text);
    const auto out = word_count(m.generate(r));
    CHECK(out >= n);
    CHECK(out * 2 <= n * 3);
  }
}

TEST_CASE("http backend refuses to start without a key") {
  HttpOptions o;
  o.endpoint = "http://127.0.0.1:9/never";
  CHECK_THROWS_AS(HttpBackend{o}, AuthError);
  o.api_key = "k";
  o.endpoint = "not a url";
  CHECK_THROWS_AS(HttpBackend{o}, PreconditionError);
}

TEST_CASE("http backend sends the prompt and reads text") {
  std::string auth, body;
  Server server([&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    body = req.body;
    res.set_content(R"({"choices": [{"text": "Lovely noodles."}]})", "application/json");
  });
  HttpBackend backend(options(server.endpoint()));
  CHECK(backend.generate(request()) == "Lovely noodles.");
  CHECK(auth == "Bearer test-key");
  const auto j = nlohmann::json::parse(body);
  CHECK(j.at("model") == "model_b");
  CHECK(j.at("prompt") == request().prompt());
  CHECK(j.at("temperature").get<double>() == 0.42);
}

TEST_CASE("http backend retries transient failures with backoff") {
  std::atomic<int> calls{0};
  Server server([&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"text": "ok"})", "application/json");
  });
  std::vector<std::chrono::milliseconds> sleeps;
  HttpBackend backend(options(server.endpoint(), &sleeps));
  CHECK(backend.generate(request()) == "ok");
  CHECK(backend.attempts() == 3);
  REQUIRE(sleeps.size() == 2);
  CHECK(sleeps[1] == 2 * sleeps[0]);
}

TEST_CASE("http backend gives up after the retry budget") {
  std::atomic<int> calls{0};
  Server server([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 429;
  });
  HttpBackend backend(options(server.endpoint()));
  try {
    backend.generate(request());
    FAIL("expected ServiceError");
  } catch (const ServiceError& e) {
    CHECK(e.status() == 429);
  }
  CHECK(calls == 4);
}

TEST_CASE("http backend does not retry an auth failure") {
  std::atomic<int> calls{0};
  Server server([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 401;
  });
  HttpBackend backend(options(server.endpoint()));
  CHECK_THROWS_AS(backend.generate(request()), AuthError);
  CHECK(calls == 1);
}

TEST_CASE("replay backend serves recorded fixtures") {
  testing::TempDir dir;
  MockBackend mock;
  std::vector<GenRequest> reqs = {request(), request("Another seed. With two sentences.")};
  ReplayBackend::record(dir / "fx.jsonl", reqs, mock);
  auto replay = ReplayBackend::load(dir / "fx.jsonl");
  CHECK(replay.generate(reqs[1]) == mock.generate(reqs[1]));
  auto miss = reqs[0];
  miss.temperature = 0.31;
  try {
    replay.generate(miss);
    FAIL("expected ServiceError");
  } catch (const ServiceError& e) {
    CHECK(e.status() == 404);
  }
}

TEST_CASE("batches keep request order") {
  std::vector<GenRequest> reqs;
  for (int i = 0; i < 40; ++i) reqs.push_back(request("Seed number " + std::to_string(i) + ". Fine."));
  MockBackend mock;
  const auto out = generate_batch(reqs, mock, 6);
  for (std::size_t i = 0; i < reqs.size(); ++i) CHECK(out[i] == mock.generate(reqs[i]));
}

TEST_CASE("generated reviews are labeled fake and keep covariates") {
  const ReviewSet seeds({testing::review("s1", "Great dumplings. Nice staff.", "2019-01-01", true, Label::real),
                         testing::review("s2", "Cold noodles. Long wait.", "2019-02-01", true, Label::real)});
  MockBackend mock;
  const auto fakes = generate_fakes(seeds, mock, 5, 2);
  REQUIRE(fakes.size() == 2);
  CHECK(fakes[0].id == "gen-s1");
  CHECK(fakes[0].label == Label::fake);
  CHECK(fakes[0].restaurant_name == seeds[0].restaurant_name);
  CHECK(fakes[0].text != seeds[0].text);
  CHECK(generate_fakes(seeds, mock, 5, 1).reviews() == fakes.reviews());
}
