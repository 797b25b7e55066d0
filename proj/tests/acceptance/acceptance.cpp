// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../support/oracles.hpp"
#include "../support/survey_fixture.hpp"
#include "fakerev/app.hpp"
#include "fakerev/calibration.hpp"
#include "fakerev/detect.hpp"
#include "fakerev/lm.hpp"
#include "fakerev/random.hpp"
#include "fakerev/stats.hpp"
#include "fakerev/stylometrics.hpp"
#include "fakerev/survey.hpp"
#include "fakerev/synthetic.hpp"
#include "fakerev/text.hpp"

using namespace fakerev;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kFormulaTol = 1e-9;
constexpr double kAnovaFTol = 1e-9;
constexpr double kAnovaPTol = 1e-3;
constexpr double kTukeyTol = 1e-9;
constexpr double kMinDetectorAccuracy = 0.95;
constexpr double kGradientTol = 1e-5;
constexpr double kYoudenTol = 1e-12;
constexpr double kSignTestAlpha = 0.01;
constexpr double kPipelineSeconds = 300;
constexpr double kPlantedAlpha = 0.05;
constexpr double kPlantedSuccessShare = 0.9;
constexpr double kSurveyAccuracyTol = 1e-4;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

using Strings = std::vector<std::string>;

Check formulas() {
  Check c;
  const double a = ari("The cat sat on the mat.");
  c.require(std::fabs(a - -5.085) <= kFormulaTol, "ari = " + fmt("%.12f", a));
  c.require(reading_time(std::string(100, 'x')) == 1.469, "reading_time(100) = " + fmt("%.17g", reading_time(std::string(100, 'x'))));
  for (int v : {2, 10, 50}) {
    // v - 1 modelled tokens plus the unknown token, each seen once.
    Strings vocab, doc;
    for (int i = 0; i + 1 < v; ++i) {
      vocab.push_back("w" + std::to_string(i));
      doc.push_back(vocab.back());
    }
    doc.push_back("out-of-vocabulary");
    NGramOptions o;
    o.order = 1;
    o.vocabulary = vocab;
    const auto lm = NGramModel::train(std::vector<Strings>{doc}, o);
    const double ppl = perplexity(lm, Strings{"w0", "nothing", "w0", "w1", "else"});
    c.require(std::fabs(ppl - v) <= kFormulaTol, "uniform V=" + std::to_string(v) + " ppl " + fmt("%.12f", ppl));
  }
  if (c.ok) c.detail = "ari=" + fmt("%.12f", a) + ", reading_time(100)=1.469, uniform perplexity = V for V in {2, 10, 50}";
  return c;
}

Check statistics() {
  Check c;
  const std::vector<std::vector<double>> g = {{1, 2, 3}, {4, 5, 6}};
  const auto r = anova_oneway(g);
  const double p_oracle = oracle::f_sf_series(13.5, 1, 4);
  c.require(std::fabs(r.f - 13.5) <= kAnovaFTol, "F = " + fmt("%.12f", r.f));
  c.require(std::fabs(r.p - 0.0213) <= kAnovaPTol, "p = " + fmt("%.6f", r.p));
  c.require(std::fabs(p_oracle - 0.0213) <= kAnovaPTol, "oracle p = " + fmt("%.6f", p_oracle));

  Rng rng(20230501);
  double worst_t = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::vector<double>> two(2);
    const auto na = 2 + rng.below(40), nb = 2 + rng.below(40);
    for (std::size_t i = 0; i < na; ++i) two[0].push_back(rng.normal(0, 1));
    for (std::size_t i = 0; i < nb; ++i) two[1].push_back(rng.normal(0.3, 1.5));
    const double t2 = oracle::pooled_t_squared(two[0], two[1]);
    worst_t = std::max(worst_t, std::fabs(anova_oneway(two).f - t2) / std::max(1.0, t2));
  }
  c.require(worst_t <= kAnovaFTol, "F vs t^2 diff " + fmt("%.3g", worst_t));

  double worst_q = 0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<double>> groups(3 + rep % 3);
    std::vector<LabeledSample> samples;
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const auto n = 2 + rng.below(15);
      for (std::size_t i = 0; i < n; ++i) groups[k].push_back(rng.normal(static_cast<double>(k) * 0.4, 1));
      samples.push_back({"g" + std::to_string(k), groups[k]});
    }
    const auto ours = tukey_hsd(samples);
    const auto ref = oracle::tukey_q(groups);
    for (std::size_t i = 0; i < ref.size(); ++i) worst_q = std::max(worst_q, std::fabs(ours.pairs[i].q - ref[i]));
  }
  c.require(worst_q <= kTukeyTol, "Tukey q diff " + fmt("%.3g", worst_q));
  c.detail = c.ok ? "F=" + fmt("%.9f", r.f) + " p=" + fmt("%.6f", r.p) + " (oracle " + fmt("%.6f", p_oracle) +
                        "), max |F-t^2|=" + fmt("%.2g", worst_t) + ", max |dq|=" + fmt("%.2g", worst_q)
                  : c.detail;
  return c;
}

Check detectors() {
  Check c;
  const auto set = synthetic::two_topic_corpus(2024, 2000);
  const auto [train, test] = split(set, 0.8, 17, Stratify::by_label);
  auto featurize = [](const ReviewSet& s, const Vocabulary* v) {
    std::vector<Strings> docs;
    Labels y;
    for (const auto& r : s) {
      docs.push_back(tokenize_words(r.text));
      y.push_back(r.label == Label::fake);
    }
    auto [x, vocab] = vectorize(docs, v);
    return std::tuple{std::move(x), std::move(vocab), std::move(y)};
  };
  const auto [x, vocab, y] = featurize(train, nullptr);
  const auto [xt, unused, yt] = featurize(test, &vocab);

  const Trainer nb = [](const DocTermMatrix& m, std::span<const std::uint8_t> l, double a) { return train_nb(m, l, a); };
  const Trainer lr = [](const DocTermMatrix& m, std::span<const std::uint8_t> l, double lambda) {
    return train_lr(m, l, lambda, {}, 0, Exec::serial);
  };
  const auto cv_nb = cross_validate(x, y, kNbAlphaGrid, 5, 1, nb);
  const auto cv_lr = cross_validate(x, y, kLrLambdaGrid, 5, 1, lr);
  const auto acc = [&](const DetectorModel& m) { return evaluate(classify(m.score_all(xt), 0.5), yt).accuracy; };
  const double acc_nb = acc(train_nb(x, y, cv_nb.best));
  const auto lr_model = train_lr(x, y, cv_lr.best);
  const double acc_lr = acc(lr_model);
  c.require(acc_nb >= kMinDetectorAccuracy, "NB accuracy " + fmt("%.4f", acc_nb));
  c.require(acc_lr >= kMinDetectorAccuracy, "LR accuracy " + fmt("%.4f", acc_lr));

  const auto& p = *lr_model.logistic();
  const double lambda = cv_lr.best;
  const auto g = logistic_loss_gradient(x, y, p.weights, p.bias, lambda, Exec::parallel);
  double worst = 0;
  const double h = 1e-6;
  for (std::size_t j = 0; j < p.weights.size(); j += std::max<std::size_t>(1, p.weights.size() / 60)) {
    auto wp = p.weights;
    auto wm = p.weights;
    wp[j] += h;
    wm[j] -= h;
    const double fd = (logistic_loss(x, y, wp, p.bias, lambda, Exec::serial) - logistic_loss(x, y, wm, p.bias, lambda, Exec::serial)) / (2 * h);
    worst = std::max(worst, std::fabs(fd - g.grad_w[j]));
  }
  const double fd_b = (logistic_loss(x, y, p.weights, p.bias + h, lambda, Exec::serial) -
                       logistic_loss(x, y, p.weights, p.bias - h, lambda, Exec::serial)) / (2 * h);
  worst = std::max(worst, std::fabs(fd_b - g.grad_b));
  c.require(worst <= kGradientTol, "gradient vs finite differences " + fmt("%.3g", worst));
  if (c.ok) {
    c.detail = "NB alpha=" + fmt("%g", cv_nb.best) + " acc=" + fmt("%.4f", acc_nb) + ", LR lambda=" + fmt("%g", cv_lr.best) +
               " acc=" + fmt("%.4f", acc_lr) + ", max |grad - fd|=" + fmt("%.2g", worst);
  }
  return c;
}

Check calibration() {
  Check c;
  Rng rng(99);
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto n = 10 + rng.below(200);
    std::vector<double> s;
    Labels y;
    for (std::size_t i = 0; i < n; ++i) {
      y.push_back(rng.coin());
      s.push_back(std::round((rng.unit() + (y.back() ? 0.25 : 0.0)) * 40) / 50);
    }
    y[0] = 0;
    y[1] = 1;
    worst = std::max(worst, std::fabs(youden_j(roc(s, y)).j - oracle::youden_brute_force(s, y).j));
  }
  c.require(worst <= kYoudenTol, "youden vs brute force " + fmt("%.3g", worst));

  const std::vector<double> sep = {0.97, 0.91, 0.85, 0.33, 0.2, 0.05};
  const Labels sep_y = {1, 1, 1, 0, 0, 0};
  c.require(youden_j(roc(sep, sep_y)).j == 1.0, "separated J != 1");

  bool monotone = true;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> s;
    Labels y;
    for (int i = 0; i < 300; ++i) {
      y.push_back(rng.coin());
      s.push_back(std::clamp(rng.normal(y.back() ? 0.7 : 0.4, 0.2), 0.0, 1.0));
    }
    const auto cal = calibrate(s, y);
    const auto cols = classify_sweep(s, cal);
    // Order the sweep columns by threshold, J included.
    std::vector<std::pair<double, double>> by_t;
    for (const auto& col : cols) by_t.emplace_back(col.threshold, col.flagged_fraction);
    std::sort(by_t.begin(), by_t.end());
    for (std::size_t i = 1; i < by_t.size(); ++i) monotone = monotone && by_t[i].second <= by_t[i - 1].second;
  }
  c.require(monotone, "flagged fraction increased with threshold");
  if (c.ok) c.detail = "100 instances, max |J - brute force|=" + fmt("%.2g", worst) + ", separated J=1, sweep monotone";
  return c;
}

Check coherence_properties() {
  Check c;
  const auto train_text = synthetic::ordered_language_corpus(5, 400);
  std::vector<Strings> docs;
  for (const auto& t : train_text) docs.push_back(tokenize_words(t));
  const auto lm = NGramModel::train(docs);

  const auto single = coherence(lm, "We ordered the soup and it arrived quickly.", 1);
  c.require(single.tc == 0.0 && single.permutation_ppls.size() == 1, "single sentence tc " + fmt("%g", single.tc));

  const auto held_out = synthetic::ordered_language_corpus(6, 100);
  const auto seven = coherence(lm, held_out.front(), 2);
  c.require(split_sentences(held_out.front()).size() == 7, "ordered review does not have 7 sentences");
  c.require(seven.permutation_ppls.size() == 120, "7 sentences scored " + std::to_string(seven.permutation_ppls.size()) + " orderings");

  double sum = 0;
  std::size_t positive = 0, nonzero = 0;
  for (std::size_t i = 0; i < held_out.size(); ++i) {
    const double tc = coherence(lm, held_out[i], derive_seed(8, std::to_string(i))).tc;
    sum += tc;
    if (tc != 0) {
      ++nonzero;
      positive += tc > 0;
    }
  }
  const double p = oracle::sign_test_p(positive, nonzero);
  c.require(sum / 100 > 0, "mean tc " + fmt("%g", sum / 100));
  c.require(p < kSignTestAlpha, "sign test p " + fmt("%.3g", p));
  if (c.ok) {
    c.detail = "single tc=0, 120 orderings, mean tc=" + fmt("%.3f", sum / 100) + " (" + std::to_string(positive) + "/" +
               std::to_string(nonzero) + " positive, sign test p=" + fmt("%.2g", p) + ")";
  }
  return c;
}

int run_cli(const std::vector<std::string>& args, std::string& err_text) {
  std::vector<const char*> argv = {"fakerev"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  err_text = err.str();
  return code;
}

Check pipeline() {
  Check c;
  const fs::path root = fs::temp_directory_path() / ("fakerev-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const auto config = root / "config.json";
  std::ofstream(config) << R"({"paths": {"corpus": ")" FAKEREV_DATA_DIR R"(/reviews.jsonl",
    "dale_chall": ")" FAKEREV_DATA_DIR R"(/dale_chall.txt",
    "lexicon_positive": ")" FAKEREV_DATA_DIR R"(/lexicon/positive.txt",
    "lexicon_negative": ")" FAKEREV_DATA_DIR R"(/lexicon/negative.txt"}})";

  double slowest = 0;
  for (const char* run : {"run1", "run2"}) {
    const auto start = std::chrono::steady_clock::now();
    for (const char* step : {"ingest", "generate", "train", "calibrate", "infer", "metrics", "analyze"}) {
      std::string err;
      const int code = run_cli({"--config", config.string(), "--out-dir", (root / run).string(), "--seed", "42", step}, err);
      if (code != 0) {
        c.require(false, std::string(run) + " " + step + " exited " + std::to_string(code) + ": " + err);
        fs::remove_all(root);
        return c;
      }
    }
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  c.require(slowest < kPipelineSeconds, "pipeline took " + fmt("%.1f", slowest) + " s");

  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(root / "run1")) {
    const auto name = entry.path().filename();
    ++compared;
    c.require(fs::exists(root / "run2" / name) && slurp(entry.path()) == slurp(root / "run2" / name),
              "differs between runs: " + name.string());
  }

  const auto table = slurp(root / "run1" / "table4.txt");
  const Strings variables = {"Rating", "#Friends", "#Reviews", "#Photos", "AvgRating", "PriceLevel", "#RestReviews", "#Visits",
                             "NormVisits", "ChainStatus", "Perplexity", "Coherence", "ARI", "#DW", "RTime", "Sentiment"};
  std::istringstream lines(table);
  std::string line;
  std::size_t blocks = 0, rows = 0, starred = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("Threshold ", 0) == 0) ++blocks;
    for (const auto& v : variables) {
      if (line.rfind(v + " ", 0) == 0) {
        ++rows;
        starred += line.back() == '*';
      }
    }
  }
  c.require(blocks == 7, std::to_string(blocks) + " threshold blocks");
  c.require(rows == 16 * 7, std::to_string(rows) + " variable rows");
  c.require(starred > 0 && table.find("*p<.05, **p<.01, ***p<.001") != std::string::npos, "no significance stars");
  if (c.ok) {
    c.detail = std::to_string(compared) + " artifacts byte-identical across two runs, slowest run " + fmt("%.1f", slowest) +
               " s, 16 variables x 7 thresholds, " + std::to_string(starred) + " starred cells";
  }
  fs::remove_all(root);
  return c;
}

Check planted_effects() {
  Check c;
  const auto dale = WordList::load(FAKEREV_DATA_DIR "/dale_chall.txt");
  const auto lexicon = LexiconSentiment::load(FAKEREV_DATA_DIR "/lexicon/positive.txt", FAKEREV_DATA_DIR "/lexicon/negative.txt");
  constexpr int kReplications = 20;
  int successes = 0;
  std::array<int, 4> hits{};  // Rating, #Friends, Sentiment significant; PriceLevel not
  const Strings planted_vars = {"Rating", "#Friends", "Sentiment"};
  synthetic::PoolOptions opts;
  opts.n_human = 2000;
  opts.n_ai = 500;

  for (int rep = 0; rep < kReplications; ++rep) {
    const std::uint64_t seed = derive_seed(700, std::to_string(rep));
    const auto train = synthetic::voiced_training_set(derive_seed(seed, "train"), 400, opts);
    const auto valid = synthetic::voiced_training_set(derive_seed(seed, "valid"), 200, opts);
    std::vector<Strings> docs;
    Labels y;
    std::vector<Strings> human_docs;
    for (const auto& r : train) {
      docs.push_back(tokenize_words(r.text));
      y.push_back(r.label == Label::fake);
      if (r.label == Label::real) human_docs.push_back(docs.back());
    }
    const auto [x, vocab] = vectorize(docs);
    const auto model = train_nb(x, y, 1.0);
    auto score = [&](const ReviewSet& s) {
      std::vector<Strings> d;
      for (const auto& r : s) d.push_back(tokenize_words(r.text));
      return model.score_all(vectorize(d, &vocab).first);
    };
    Labels yv;
    for (const auto& r : valid) yv.push_back(r.label == Label::fake);
    const auto cal = calibrate(score(valid), yv);

    const auto pool = synthetic::planted_pool(seed, opts);
    const auto sweep = classify_sweep(score(pool.reviews), cal);
    const auto lm = NGramModel::train(human_docs);
    const auto style = score_reviews(pool.reviews, {lm, dale, lexicon, seed});
    const auto vars = build_variable_table(pool.reviews, style, chain_status(pool.reviews));
    const auto table = sensitivity(vars, sweep);
    const std::size_t j = sweep.size() - 1;
    auto p_of = [&](const std::string& name) {
      const auto it = std::find(table.variables.begin(), table.variables.end(), name);
      const auto& row = table.at(j, static_cast<std::size_t>(it - table.variables.begin()));
      return row.computable ? row.anova.p : 1.0;
    };
    bool ok = true;
    for (std::size_t v = 0; v < planted_vars.size(); ++v) {
      const bool sig = p_of(planted_vars[v]) < kPlantedAlpha;
      hits[v] += sig;
      ok = ok && sig;
    }
    const bool placebo_quiet = p_of("PriceLevel") > kPlantedAlpha;
    hits[3] += placebo_quiet;
    successes += ok && placebo_quiet;
  }
  const double share = static_cast<double>(successes) / kReplications;
  c.require(share >= kPlantedSuccessShare, std::to_string(successes) + "/20 replications recovered all effects");
  c.detail = (c.ok ? "" : c.detail + "; ") + std::to_string(successes) + "/20 replications: Rating " +
             std::to_string(hits[0]) + "/20, #Friends " + std::to_string(hits[1]) + "/20, Sentiment " +
             std::to_string(hits[2]) + "/20 at p<.05; PriceLevel p>.05 in " + std::to_string(hits[3]) + "/20";
  return c;
}

Check survey() {
  Check c;
  const auto pools = synthetic::survey_pools(31, 60);
  const auto form = build_survey(pools.humans, pools.fakes, 31);
  std::array<int, 4> counts{};
  std::size_t worst_gap = 0;
  for (const auto& q : form.questions) {
    ++counts[static_cast<std::size_t>(q.category)];
    worst_gap = std::max(worst_gap, q.human_words > q.ai_words ? q.human_words - q.ai_words : q.ai_words - q.human_words);
  }
  for (const auto& q : form.training) {
    worst_gap = std::max(worst_gap, q.human_words > q.ai_words ? q.human_words - q.ai_words : q.ai_words - q.human_words);
  }
  c.require(counts == std::array<int, 4>{10, 10, 10, 10}, "category counts off");
  c.require(worst_gap <= kMaxWordGap, "word gap " + std::to_string(worst_gap));

  std::istringstream in(fixture::survey_responses(form));
  const auto score = score_survey(form, read_responses(in));
  const double acc = score.overall_accuracy.value_or(-1);
  c.require(std::fabs(acc - 0.5713) <= kSurveyAccuracyTol, "accuracy " + fmt("%.6f", acc));
  c.require(score.tukey && score.tukey->pairs.size() == 6, "Tukey table does not have six rows");
  if (c.ok) {
    c.detail = "10/10/10/10 pairs, max gap " + std::to_string(worst_gap) + " words, accuracy " + fmt("%.4f", 100 * acc) +
               "% over " + std::to_string(score.respondents - score.respondents_dropped) + " respondents, 6 Tukey rows";
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"formula exactness", formulas},
      {"statistics oracles", statistics},
      {"detector sanity", detectors},
      {"calibration correctness", calibration},
      {"shuffle-test properties", coherence_properties},
      {"pipeline determinism", pipeline},
      {"planted-effect recovery", planted_effects},
      {"survey instrument", survey},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].name << " (" << fmt("%.1f", secs)
              << " s): " << c.detail << std::endl;
  }
  return failed;
}
