#include "fakerev/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fakerev/error.hpp"

namespace fakerev {

RocCurve roc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw PreconditionError("roc: scores and labels differ in length");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw PreconditionError("roc: non-finite score");
    pos += labels[i] ? 1 : 0;
  }
  const std::size_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) throw PreconditionError("roc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Walk up through the distinct scores; at each one, everything at or above
  // it is classified fake.
  RocCurve curve;
  std::size_t tp = pos;
  std::size_t fp = neg;
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = scores[order[i]];
    curve.points.push_back({t, static_cast<double>(tp) / pos, static_cast<double>(fp) / neg});
    while (i < order.size() && scores[order[i]] == t) {
      (labels[order[i]] ? tp : fp) -= 1;
      ++i;
    }
  }
  const double top = scores[order.back()];
  curve.points.push_back({std::nextafter(top, std::numeric_limits<double>::infinity()), 0.0, 0.0});
  return curve;
}

YoudenResult youden_j(const RocCurve& curve) {
  if (curve.points.empty()) throw PreconditionError("youden_j: empty curve");
  YoudenResult best{curve.points.front().threshold, curve.points.front().tpr - curve.points.front().fpr};
  for (const auto& p : curve.points) {
    const double j = p.tpr - p.fpr;
    if (j > best.j) best = {p.threshold, j};
  }
  return best;
}

std::vector<std::string> Calibration::sweep_labels() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (i + 1 == sweep.size()) {
      out.emplace_back("J");
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", sweep[i]);
      out.emplace_back(buf);
    }
  }
  return out;
}

std::string Calibration::to_json() const {
  nlohmann::ordered_json j;
  j["j_star"] = j_star;
  j["j_value"] = j_value;
  j["sweep"] = sweep;
  j["sweep_labels"] = sweep_labels();
  return j.dump(2) + "\n";
}

Calibration Calibration::from_json(std::string_view text) {
  Calibration c;
  try {
    const auto j = nlohmann::json::parse(text);
    c.j_star = j.at("j_star").get<double>();
    c.j_value = j.at("j_value").get<double>();
    c.sweep = j.at("sweep").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("calibration: ") + e.what());
  }
  if (c.sweep.empty() || c.sweep.back() != c.j_star) throw DataError("calibration: sweep must end with j_star");
  if (c.j_value < 0.0 || c.j_value > 1.0) throw DataError("calibration: j_value outside [0, 1]");
  return c;
}

void Calibration::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << to_json();
}

Calibration Calibration::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

Calibration calibrate(std::span<const double> scores, std::span<const std::uint8_t> labels,
                      std::span<const double> fixed) {
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (!(fixed[i] > 0.0 && fixed[i] < 1.0)) throw PreconditionError("calibrate: thresholds must lie in (0, 1)");
    if (i > 0 && !(fixed[i] > fixed[i - 1])) throw PreconditionError("calibrate: thresholds must be increasing");
  }
  const auto best = youden_j(roc(scores, labels));
  Calibration c;
  c.j_star = best.threshold;
  c.j_value = best.j;
  c.sweep.assign(fixed.begin(), fixed.end());
  c.sweep.push_back(best.threshold);
  return c;
}

EvalReport evaluate(std::span<const std::uint8_t> predictions, std::span<const std::uint8_t> labels) {
  if (predictions.size() != labels.size()) throw PreconditionError("evaluate: length mismatch");
  if (labels.empty()) throw PreconditionError("evaluate: no items");
  EvalReport r;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] != 0;
    const bool y = labels[i] != 0;
    if (p && y) ++r.tp;
    else if (p) ++r.fp;
    else if (y) ++r.fn;
    else ++r.tn;
  }
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(labels.size());
  r.precision_undefined = r.tp + r.fp == 0;
  r.recall_undefined = r.tp + r.fn == 0;
  if (!r.precision_undefined) r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  if (!r.recall_undefined) r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  if (r.precision + r.recall > 0.0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

std::vector<std::uint8_t> classify(std::span<const double> scores, double threshold) {
  std::vector<std::uint8_t> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1 : 0;
  return out;
}

std::vector<SweepColumn> classify_sweep(std::span<const double> scores, const Calibration& calibration) {
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw PreconditionError("classify_sweep: scores must lie in [0, 1]");
  }
  const auto labels = calibration.sweep_labels();
  std::vector<SweepColumn> out;
  for (std::size_t i = 0; i < calibration.sweep.size(); ++i) {
    SweepColumn col{labels[i], calibration.sweep[i], classify(scores, calibration.sweep[i]), 0.0};
    const auto flagged = std::count(col.flags.begin(), col.flags.end(), std::uint8_t{1});
    col.flagged_fraction = scores.empty() ? 0.0 : static_cast<double>(flagged) / static_cast<double>(scores.size());
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace fakerev
