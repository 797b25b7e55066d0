#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fakerev/app.hpp"
#include "fakerev/error.hpp"

namespace fakerev::app {
namespace {

using nlohmann::json;

// Reads one JSON section, rejecting keys the section does not define.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw UsageError("config: '" + name_ + "' must be an object");
  }

  /// Call after reading every key.
  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw UsageError("config: unknown key '" + qualified(it.key()) + "'");
    }
  }

  template <typename T>
  void get(const char* key, T& target) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      target = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw UsageError("config: '" + qualified(key) + "' has the wrong type");
    }
  }

  void path(const char* key, std::filesystem::path& target) {
    std::string s = target.string();
    get(key, s);
    target = s;
  }

  const json* section(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string qualified(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

}  // namespace

void RunConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw UsageError("split.train_fraction must lie in (0, 1)");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw UsageError("split.validation_fraction must lie in (0, 1)");
  }
  if (detector != "nb" && detector != "lr") throw UsageError("train.detector must be nb or lr");
  if (features != "words" && features != "bpe") throw UsageError("train.features must be words or bpe");
  if (folds < 2) throw UsageError("train.folds must be >= 2");
  if (nb_alpha_grid.empty() || lr_lambda_grid.empty()) throw UsageError("hyperparameter grids must be non-empty");
  for (double a : nb_alpha_grid) {
    if (!(a > 0.0)) throw UsageError("train.nb_alpha_grid values must be > 0");
  }
  for (double l : lr_lambda_grid) {
    if (!(l >= 0.0)) throw UsageError("train.lr_lambda_grid values must be >= 0");
  }
  if (!(lr_schedule.step > 0.0) || !(lr_schedule.tolerance > 0.0) || lr_schedule.max_iterations == 0) {
    throw UsageError("train.lr_step, lr_tolerance and lr_max_iterations must be positive");
  }
  for (std::size_t i = 0; i < sweep_thresholds.size(); ++i) {
    const double t = sweep_thresholds[i];
    if (!(t > 0.0 && t < 1.0)) throw UsageError("sweep.thresholds must lie in (0, 1)");
    if (i > 0 && !(t > sweep_thresholds[i - 1])) throw UsageError("sweep.thresholds must be strictly increasing");
  }
  if (lm.order < 1 || !(lm.k > 0.0)) throw UsageError("lm.order must be >= 1 and lm.k > 0");
  if (gen_backend != "mock" && gen_backend != "http" && gen_backend != "replay") {
    throw UsageError("gen.backend must be mock, http or replay");
  }
  if (gen_max_inflight == 0) throw UsageError("gen.max_inflight must be >= 1");
}

void apply_config_file(RunConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config '" + path.string() + "': " + e.what());
  }
  Section root(j, "");
  root.get("seed", c.seed);
  root.path("out_dir", c.out_dir);
  if (const auto* s = root.section("paths")) {
    Section p(*s, "paths");
    p.path("corpus", c.corpus);
    p.path("dale_chall", c.dale_chall);
    p.path("lexicon_positive", c.lexicon_positive);
    p.path("lexicon_negative", c.lexicon_negative);
    p.done();
  }
  if (const auto* s = root.section("split")) {
    Section p(*s, "split");
    p.get("train_fraction", c.train_fraction);
    p.get("validation_fraction", c.validation_fraction);
    p.done();
  }
  if (const auto* s = root.section("train")) {
    Section p(*s, "train");
    p.get("detector", c.detector);
    p.get("features", c.features);
    p.get("bpe_merges", c.bpe_merges);
    p.get("folds", c.folds);
    p.get("nb_alpha_grid", c.nb_alpha_grid);
    p.get("lr_lambda_grid", c.lr_lambda_grid);
    p.get("lr_step", c.lr_schedule.step);
    p.get("lr_tolerance", c.lr_schedule.tolerance);
    p.get("lr_max_iterations", c.lr_schedule.max_iterations);
    p.get("lr_strict", c.lr_schedule.strict);
    p.done();
  }
  if (const auto* s = root.section("sweep")) {
    Section p(*s, "sweep");
    p.get("thresholds", c.sweep_thresholds);
    p.done();
  }
  if (const auto* s = root.section("infer")) {
    Section p(*s, "infer");
    p.get("cutoff_year", c.cutoff_year);
    p.done();
  }
  if (const auto* s = root.section("lm")) {
    Section p(*s, "lm");
    p.get("order", c.lm.order);
    p.get("k", c.lm.k);
    p.get("min_count", c.lm.min_count);
    p.done();
  }
  if (const auto* s = root.section("gen")) {
    Section p(*s, "gen");
    p.get("backend", c.gen_backend);
    p.get("endpoint", c.gen_endpoint);
    p.get("max_inflight", c.gen_max_inflight);
    p.path("fixtures", c.gen_fixtures);
    p.done();
  }
  root.done();
}

}  // namespace fakerev::app
