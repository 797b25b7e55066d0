#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "fakerev/calibration.hpp"
#include "fakerev/error.hpp"
#include "fakerev/random.hpp"
#include "helpers.hpp"

using namespace fakerev;

namespace {

struct Instance {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
};

Instance random_instance(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  Instance in;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t y = (rng.unit() < 0.4);
    // Coarse scores so ties are common.
    in.scores.push_back(std::round((rng.unit() * 0.7 + (y ? 0.3 : 0.0)) * 20) / 20);
    in.labels.push_back(y);
  }
  in.labels[0] = 0;
  in.labels[1] = 1;
  return in;
}

}  // namespace

TEST_CASE("separated scores reach the corner") {
  const std::vector<double> s = {0.9, 0.8, 0.4, 0.2};
  const std::vector<std::uint8_t> y = {1, 1, 0, 0};
  const auto curve = roc(s, y);
  bool corner = false;
  for (const auto& p : curve.points) corner = corner || (p.tpr == 1.0 && p.fpr == 0.0);
  CHECK(corner);
  const auto j = youden_j(curve);
  CHECK(j.j == 1.0);
  CHECK(j.threshold > 0.4);
  CHECK(j.threshold <= 0.8);
}

TEST_CASE("identical scores give a diagonal-free curve") {
  const std::vector<double> s(6, 0.3);
  const std::vector<std::uint8_t> y = {1, 0, 1, 0, 0, 1};
  const auto curve = roc(s, y);
  for (const auto& p : curve.points) {
    const bool ok = (p.tpr == 1 && p.fpr == 1) || (p.tpr == 0 && p.fpr == 0);
    CHECK(ok);
  }
  CHECK(youden_j(curve).j == 0.0);
}

TEST_CASE("flipping labels swaps the rates") {
  const auto in = random_instance(3, 60);
  auto flipped = in.labels;
  for (auto& v : flipped) v = 1 - v;
  const auto a = roc(in.scores, in.labels);
  const auto b = roc(in.scores, flipped);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].tpr == b.points[i].fpr);
    CHECK(a.points[i].fpr == b.points[i].tpr);
  }
}

TEST_CASE("youden matches a brute-force search") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto in = random_instance(seed, 20 + seed % 50);
    const auto ours = youden_j(roc(in.scores, in.labels));
    const auto brute = oracle::youden_brute_force(in.scores, in.labels);
    CHECK(ours.j == doctest::Approx(brute.j).epsilon(1e-12));
    if (std::isfinite(brute.threshold)) CHECK(ours.threshold == brute.threshold);
    for (const auto& p : roc(in.scores, in.labels).points) CHECK(ours.j >= p.tpr - p.fpr - 1e-15);
  }
}

TEST_CASE("random labels give a small J") {
  Rng rng(77);
  std::vector<double> s;
  std::vector<std::uint8_t> y;
  for (int i = 0; i < 4000; ++i) {
    s.push_back(rng.unit());
    y.push_back(rng.coin());
  }
  CHECK(youden_j(roc(s, y)).j < 0.15);
}

TEST_CASE("roc needs both classes") {
  const std::vector<double> s = {0.1, 0.2};
  const std::vector<std::uint8_t> y = {1, 1};
  CHECK_THROWS_AS(roc(s, y), PreconditionError);
}

TEST_CASE("evaluation metrics") {
  const std::vector<std::uint8_t> y = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  const std::vector<std::uint8_t> p = {1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
  const auto r = evaluate(p, y);
  CHECK(r.tp == 2);
  CHECK(r.fp == 1);
  CHECK(r.fn == 1);
  CHECK(r.tn == 6);
  CHECK(r.precision == doctest::Approx(2.0 / 3));
  CHECK(r.recall == doctest::Approx(2.0 / 3));
  CHECK(r.f1 == doctest::Approx(2.0 / 3));
  CHECK(r.accuracy == doctest::Approx(0.8));

  const auto all = evaluate(y, y);
  CHECK(all.accuracy == 1.0);
  CHECK(all.precision == 1.0);
  CHECK(all.recall == 1.0);
  CHECK(all.f1 == 1.0);
  auto wrong = y;
  for (auto& v : wrong) v = 1 - v;
  CHECK(evaluate(wrong, y).accuracy == 0.0);

  const std::vector<std::uint8_t> none(10, 0);
  const auto undefined = evaluate(none, y);
  CHECK(undefined.precision_undefined);
  CHECK(undefined.precision == 0.0);
}

TEST_CASE("evaluation matches a direct confusion count") {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::uint8_t> p, y;
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (int i = 0; i < 40; ++i) {
      p.push_back(rng.coin());
      y.push_back(rng.coin());
      tp += p.back() && y.back();
      fp += p.back() && !y.back();
      fn += !p.back() && y.back();
      tn += !p.back() && !y.back();
    }
    const auto r = evaluate(p, y);
    CHECK(std::fabs(r.accuracy - (tp + tn) / 40) < 1e-12);
    if (tp + fp > 0) CHECK(std::fabs(r.precision - tp / (tp + fp)) < 1e-12);
    if (tp + fn > 0) CHECK(std::fabs(r.recall - tp / (tp + fn)) < 1e-12);
  }
}

TEST_CASE("calibration sweep") {
  const std::vector<double> s = {0.95, 0.81, 0.62, 0.3, 0.1, 0.55};
  const std::vector<std::uint8_t> y = {1, 1, 1, 0, 0, 0};
  const auto cal = calibrate(s, y);
  REQUIRE(cal.sweep.size() == 7);
  CHECK(cal.sweep.back() == cal.j_star);
  CHECK(cal.sweep_labels() == std::vector<std::string>{"0.5", "0.6", "0.7", "0.8", "0.9", "0.99", "J"});

  const auto cols = classify_sweep(s, cal);
  CHECK(cols[0].flags[0] == 1);
  CHECK(cols[4].flags[0] == 1);
  CHECK(cols[5].flags[0] == 0);
  for (std::size_t t = 1; t + 1 < cols.size(); ++t) CHECK(cols[t].flagged_fraction <= cols[t - 1].flagged_fraction);

  const std::vector<double> low = {0.1, 0.2, 0.45};
  for (std::size_t t = 0; t + 1 < cols.size(); ++t) CHECK(classify_sweep(low, cal)[t].flagged_fraction == 0.0);

  const std::vector<double> bad = {1.2};
  CHECK_THROWS_AS(classify_sweep(bad, cal), PreconditionError);
  const std::vector<double> unordered = {0.6, 0.5};
  CHECK_THROWS_AS(calibrate(s, y, unordered), PreconditionError);
}

TEST_CASE("calibration json round trip") {
  testing::TempDir dir;
  const std::vector<double> s = {0.9, 0.2, 0.7, 0.4};
  const std::vector<std::uint8_t> y = {1, 0, 1, 0};
  const auto cal = calibrate(s, y);
  cal.save(dir / "c.json");
  const auto back = Calibration::load(dir / "c.json");
  CHECK(back.j_star == cal.j_star);
  CHECK(back.sweep == cal.sweep);
  CHECK_THROWS_AS(Calibration::from_json("{\"j_star\": 0.5}"), DataError);
}
