#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fakerev/bpe.hpp"
#include "fakerev/calibration.hpp"
#include "fakerev/corpus.hpp"
#include "fakerev/csv.hpp"
#include "fakerev/detect.hpp"
#include "fakerev/error.hpp"
#include "fakerev/genclient.hpp"
#include "fakerev/lm.hpp"
#include "fakerev/random.hpp"
#include "fakerev/stats.hpp"
#include "fakerev/stylometrics.hpp"
#include "fakerev/survey.hpp"
#include "fakerev/text.hpp"
#include "workspace.hpp"

namespace fakerev::app {
namespace {

constexpr const char* kManifest = "run.manifest";

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void require_input(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::exists(path)) throw DataError(std::string(what) + " '" + path.string() + "' does not exist");
}

std::uint8_t label_byte(const Review& r) {
  if (r.label == Label::unknown) throw DataError("review '" + r.id + "' has no real/fake label");
  return r.label == Label::fake ? 1 : 0;
}

Labels labels_of(const ReviewSet& set) {
  Labels y;
  for (const auto& r : set.reviews()) y.push_back(label_byte(r));
  return y;
}

struct Splits {
  std::vector<std::string> fit;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

Splits load_splits(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  try {
    const auto j = nlohmann::json::parse(in);
    return {j.at("fit").get<std::vector<std::string>>(), j.at("validation").get<std::vector<std::string>>(),
            j.at("test").get<std::vector<std::string>>()};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ReviewSet subset(const ReviewSet& set, const std::vector<std::string>& ids) {
  std::map<std::string_view, const Review*> by_id;
  for (const auto& r : set.reviews()) by_id[r.id] = &r;
  std::vector<Review> out;
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("split refers to unknown review '" + id + "'");
    out.push_back(*it->second);
  }
  return ReviewSet(std::move(out), set.provenance());
}

/// Featurizer restored from the train artifacts.
struct Features {
  Vocabulary vocab;
  std::optional<BpeModel> bpe;

  std::vector<std::string> tokens(const std::string& text) const {
    return bpe ? bpe_featurize(*bpe, text) : tokenize_words(text);
  }

  DocTermMatrix matrix(const ReviewSet& set) const {
    std::vector<std::vector<std::string>> docs;
    for (const auto& r : set.reviews()) docs.push_back(tokens(r.text));
    return vectorize(docs, &vocab).first;
  }
};

Features load_features(const Workspace& ws, const DetectorModel& model) {
  Features f;
  f.vocab = Vocabulary::load(ws.require("vocab.txt", "train"));
  if (model.features() == "bpe") f.bpe = BpeModel::load(ws.require("bpe.txt", "train"));
  model.check_vocabulary(f.vocab);
  return f;
}

std::string model_artifact(const RunConfig& c) { return "model_" + c.detector + ".txt"; }

void write_eval_row(std::ostream& out, const std::string& model, const std::string& param, double value,
                    const std::string& threshold, const EvalReport& r) {
  const std::vector<std::string> row = {model,           param,           num(value),           threshold,
                                        fixed4(r.accuracy), fixed4(r.precision), fixed4(r.recall), fixed4(r.f1),
                                        std::to_string(r.tp), std::to_string(r.fp), std::to_string(r.fn),
                                        std::to_string(r.tn)};
  csv::write_row(out, row);
}

constexpr const char* kEvalHeader = "model,param,value,threshold,accuracy,precision,recall,f1,tp,fp,fn,tn\n";

ReviewSet inference_pool(const Workspace& ws, const RunConfig& c) {
  const auto corpus = load_reviews(ws.require("corpus.jsonl", "ingest"), Format::jsonl);
  auto pool = filter_inference_pool(corpus, c.cutoff_year);
  if (pool.empty()) throw DataError("inference pool is empty: no non-elite reviews dated after " + std::to_string(c.cutoff_year));
  return pool;
}

}  // namespace

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::uint64_t h = fnv1a64("");
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  return hex64(h);
}

Workspace::Workspace(std::filesystem::path dir, std::uint64_t seed) : dir_(std::move(dir)), seed_(seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw DataError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  std::ifstream in(dir_ / kManifest, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab != std::string::npos) manifest_[line.substr(0, tab)] = line;
  }
}

std::filesystem::path Workspace::require(const std::string& artifact, const std::string& producer) const {
  const auto p = path(artifact);
  if (!std::filesystem::exists(p)) {
    throw DataError("missing artifact '" + artifact + "' in " + dir_.string() + "; run `fakerev " + producer +
                    "` first");
  }
  return p;
}

void Workspace::record(const std::string& artifact, const std::string& command, const std::vector<std::string>& inputs) {
  std::string line = artifact + "\tcommand=" + command + "\tfnv1a64=" + file_hash(path(artifact)) +
                     "\tseed=" + std::to_string(seed_) + "\tversion=" + kVersion + "\tinputs=";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (i) line += ',';
    // Workspace artifacts are named bare; anything else is an outside file.
    const std::filesystem::path p = manifest_.count(inputs[i]) ? path(inputs[i]) : std::filesystem::path(inputs[i]);
    line += inputs[i] + ":" + file_hash(p);
  }
  manifest_[artifact] = line;
  save_manifest();
}

void Workspace::save_manifest() const {
  auto out = create(dir_ / kManifest);
  for (const auto& [name, line] : manifest_) out << line << '\n';
}

void cmd_ingest(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const auto input = o.input.empty() ? c.corpus : o.input;
  require_input(input, "corpus");
  const auto format = format_from_path(input);
  if (!format) throw UsageError("cannot tell the format of '" + input.string() + "' (use .jsonl or .csv)");
  const auto set = load_reviews(input, *format);
  Workspace ws(c.out_dir, c.seed);
  save_reviews(ws.path("corpus.jsonl"), set, Format::jsonl);
  ws.record("corpus.jsonl", "ingest", {input.string()});
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& r : set.reviews()) ++counts[static_cast<int>(r.label)];
  out << "ingested " << set.size() << " reviews (" << counts[0] << " real, " << counts[1] << " fake, " << counts[2]
      << " unknown) -> " << ws.path("corpus.jsonl").string() << '\n';
}

void cmd_generate(const RunConfig& c, std::ostream& out) {
  Workspace ws(c.out_dir, c.seed);
  const auto corpus = load_reviews(ws.require("corpus.jsonl", "ingest"), Format::jsonl);
  std::vector<Review> seeds;
  for (const auto& r : corpus.reviews()) {
    if (r.elite && r.label == Label::real) seeds.push_back(r);
  }
  if (seeds.empty()) throw DataError("no elite reviews labeled real to seed generation");
  const ReviewSet seed_set(std::move(seeds), corpus.provenance());
  auto backend = make_backend(c.gen_backend, c.gen_endpoint, c.gen_fixtures);
  const auto fakes = generate_fakes(seed_set, *backend, c.seed, c.gen_max_inflight);
  save_reviews(ws.path("generated.jsonl"), fakes, Format::jsonl);
  std::vector<Review> labeled = seed_set.reviews();
  labeled.insert(labeled.end(), fakes.reviews().begin(), fakes.reviews().end());
  save_reviews(ws.path("labeled.jsonl"), ReviewSet(std::move(labeled)), Format::jsonl);
  ws.record("generated.jsonl", "generate", {"corpus.jsonl"});
  ws.record("labeled.jsonl", "generate", {"corpus.jsonl"});
  out << "generated " << fakes.size() << " fake reviews with backend " << backend->name() << " from "
      << seed_set.size() << " elite seeds\n";
}

void cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Workspace ws(c.out_dir, c.seed);
  const auto labeled = load_reviews(ws.require("labeled.jsonl", "generate"), Format::jsonl);
  labels_of(labeled);
  const auto [train, test] = split(labeled, c.train_fraction, c.seed, Stratify::by_label);
  const auto [fit, validation] =
      split(train, 1.0 - c.validation_fraction, derive_seed(c.seed, "validation"), Stratify::by_label);
  {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    auto ids = [](const ReviewSet& s) {
      std::vector<std::string> v;
      for (const auto& r : s.reviews()) v.push_back(r.id);
      return v;
    };
    j["fit"] = ids(fit);
    j["validation"] = ids(validation);
    j["test"] = ids(test);
    create(ws.path("splits.json")) << j.dump(2) << '\n';
  }

  Features features;
  if (c.features == "bpe") {
    std::vector<std::string> texts;
    for (const auto& r : fit.reviews()) texts.push_back(r.text);
    features.bpe = BpeModel::train(texts, c.bpe_merges);
    features.bpe->save(ws.path("bpe.txt"));
  }
  std::vector<std::vector<std::string>> docs;
  for (const auto& r : fit.reviews()) docs.push_back(features.tokens(r.text));
  auto [x, vocab] = vectorize(docs);
  features.vocab = std::move(vocab);
  features.vocab.save(ws.path("vocab.txt"));
  const auto y = labels_of(fit);
  const auto fp = features.vocab.fingerprint();

  const Trainer nb_trainer = [fp](const DocTermMatrix& xs, std::span<const std::uint8_t> ys, double a) {
    return train_nb(xs, ys, a, fp);
  };
  const auto schedule = c.lr_schedule;
  const Trainer lr_trainer = [fp, schedule](const DocTermMatrix& xs, std::span<const std::uint8_t> ys, double l) {
    LrSchedule s = schedule;
    s.strict = false;
    return train_lr(xs, ys, l, s, fp, Exec::serial);
  };
  const auto cv_nb = cross_validate(x, y, c.nb_alpha_grid, c.folds, derive_seed(c.seed, "cv"), nb_trainer);
  const auto cv_lr = cross_validate(x, y, c.lr_lambda_grid, c.folds, derive_seed(c.seed, "cv"), lr_trainer);
  for (const auto* cv : {&cv_nb, &cv_lr}) {
    for (const auto& w : cv->warnings) err << "warning: " << w << '\n';
  }
  {
    auto cv_out = create(ws.path("cv.csv"));
    cv_out << "model,param,value,mean_accuracy,folds_used\n";
    for (const auto& [name, param, cv] : {std::tuple{"nb", "alpha", &cv_nb}, std::tuple{"lr", "lambda", &cv_lr}}) {
      for (std::size_t i = 0; i < cv->candidates.size(); ++i) {
        const std::vector<std::string> row = {name, param, num(cv->candidates[i]), fixed4(cv->mean_accuracy[i]),
                                              std::to_string(cv->folds_used[i])};
        csv::write_row(cv_out, row);
      }
    }
  }

  auto nb = train_nb(x, y, cv_nb.best, fp);
  auto lr = train_lr(x, y, cv_lr.best, c.lr_schedule, fp);
  if (!lr.logistic()->converged) {
    err << "warning: logistic regression stopped after " << lr.logistic()->iterations
        << " iterations with gradient norm " << num(lr.logistic()->gradient_norm) << '\n';
  }
  nb = DetectorModel(*nb.naive_bayes(), fp, c.features);
  lr = DetectorModel(*lr.logistic(), fp, c.features);
  nb.save(ws.path("model_nb.txt"));
  lr.save(ws.path("model_lr.txt"));

  const auto x_test = features.matrix(test);
  const auto y_test = labels_of(test);
  auto eval = create(ws.path("eval_test.csv"));
  eval << kEvalHeader;
  for (const auto& [name, param, value, model] :
       {std::tuple{"nb", "alpha", cv_nb.best, &nb}, std::tuple{"lr", "lambda", cv_lr.best, &lr}}) {
    const auto report = evaluate(classify(model->score_all(x_test), 0.5), y_test);
    write_eval_row(eval, name, param, value, "0.5", report);
    out << name << " (" << param << "=" << num(value) << "): test accuracy " << fixed4(report.accuracy) << ", f1 "
        << fixed4(report.f1) << '\n';
  }
  eval.close();
  for (const char* a : {"splits.json", "vocab.txt", "cv.csv", "model_nb.txt", "model_lr.txt", "eval_test.csv"}) {
    ws.record(a, "train", {"labeled.jsonl"});
  }
  if (features.bpe) ws.record("bpe.txt", "train", {"labeled.jsonl"});
  out << "train " << fit.size() << ", validation " << validation.size() << ", test " << test.size()
      << "; vocabulary " << features.vocab.size() << " terms\n";
}

void cmd_calibrate(const RunConfig& c, std::ostream& out) {
  Workspace ws(c.out_dir, c.seed);
  const auto model = DetectorModel::load(ws.require(model_artifact(c), "train"));
  const auto features = load_features(ws, model);
  const auto labeled = load_reviews(ws.require("labeled.jsonl", "generate"), Format::jsonl);
  const auto splits = load_splits(ws.require("splits.json", "train"));
  const auto validation = subset(labeled, splits.validation);
  const auto scores = model.score_all(features.matrix(validation));
  const auto y = labels_of(validation);
  const auto calibration = calibrate(scores, y, c.sweep_thresholds);
  calibration.save(ws.path("calibration.json"));
  {
    auto roc_out = create(ws.path("roc.csv"));
    roc_out << "threshold,tpr,fpr\n";
    for (const auto& p : roc(scores, y).points) {
      const std::vector<std::string> row = {num(p.threshold), num(p.tpr), num(p.fpr)};
      csv::write_row(roc_out, row);
    }
  }
  const auto test = subset(labeled, splits.test);
  const auto test_scores = model.score_all(features.matrix(test));
  const auto y_test = labels_of(test);
  {
    auto eval = create(ws.path("eval_calibrated.csv"));
    eval << kEvalHeader;
    const bool nb = model.kind() == DetectorKind::naive_bayes;
    const double value = nb ? model.naive_bayes()->alpha : model.logistic()->lambda;
    write_eval_row(eval, c.detector, nb ? "alpha" : "lambda", value, "0.5",
                   evaluate(classify(test_scores, 0.5), y_test));
    write_eval_row(eval, c.detector + "@J", nb ? "alpha" : "lambda", value, num(calibration.j_star),
                   evaluate(classify(test_scores, calibration.j_star), y_test));
  }
  const std::string model_name = model_artifact(c);
  for (const char* a : {"calibration.json", "roc.csv", "eval_calibrated.csv"}) {
    ws.record(a, "calibrate", {model_name, "vocab.txt", "splits.json", "labeled.jsonl"});
  }
  out << c.detector << ": J* = " << num(calibration.j_star) << " (J = " << fixed4(calibration.j_value)
      << ") on " << validation.size() << " validation reviews\n";
}

void cmd_infer(const RunConfig& c, std::ostream& out) {
  Workspace ws(c.out_dir, c.seed);
  const auto calibration = Calibration::load(ws.require("calibration.json", "calibrate"));
  const auto model = DetectorModel::load(ws.require(model_artifact(c), "train"));
  const auto features = load_features(ws, model);
  const auto pool = inference_pool(ws, c);
  const auto scores = model.score_all(features.matrix(pool));
  const auto sweep = classify_sweep(scores, calibration);
  {
    auto s = create(ws.path("scores.csv"));
    s << "id,score\n";
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const std::vector<std::string> row = {pool[i].id, num(scores[i])};
      csv::write_row(s, row);
    }
  }
  {
    auto f = create(ws.path("flags.csv"));
    std::vector<std::string> header = {"id", "score"};
    for (const auto& col : sweep) header.push_back(col.label);
    csv::write_row(f, header);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      std::vector<std::string> row = {pool[i].id, num(scores[i])};
      for (const auto& col : sweep) row.push_back(col.flags[i] ? "1" : "0");
      csv::write_row(f, row);
    }
  }
  const std::string model_name = model_artifact(c);
  for (const char* a : {"scores.csv", "flags.csv"}) {
    ws.record(a, "infer", {"calibration.json", model_name, "vocab.txt", "corpus.jsonl"});
  }
  out << "scored " << pool.size() << " reviews in the inference pool; flagged fraction:";
  for (const auto& col : sweep) out << ' ' << col.label << '=' << fixed4(col.flagged_fraction);
  out << '\n';
}

void cmd_metrics(const RunConfig& c, std::ostream& out) {
  Workspace ws(c.out_dir, c.seed);
  const auto labeled = load_reviews(ws.require("labeled.jsonl", "generate"), Format::jsonl);
  const auto splits = load_splits(ws.require("splits.json", "train"));
  const auto fit = subset(labeled, splits.fit);
  std::vector<std::vector<std::string>> human_docs;
  for (const auto& r : fit.reviews()) {
    if (r.label == Label::real) human_docs.push_back(tokenize_words(r.text));
  }
  if (human_docs.empty()) throw DataError("training split has no human reviews to fit the language model");
  const auto lm = NGramModel::train(human_docs, c.lm);
  lm.save(ws.path("lm.tsv"));

  require_input(c.dale_chall, "Dale-Chall word list");
  require_input(c.lexicon_positive, "positive lexicon");
  require_input(c.lexicon_negative, "negative lexicon");
  const auto familiar = WordList::load(c.dale_chall);
  const auto lexicon = LexiconSentiment::load(c.lexicon_positive, c.lexicon_negative);
  const auto pool = inference_pool(ws, c);
  const StyleScorer scorer{lm, familiar, lexicon, c.seed};
  const auto rows = score_reviews(pool, scorer);
  {
    auto s = create(ws.path("style_metrics.csv"));
    write_style_csv(s, pool, rows);
  }
  ws.record("lm.tsv", "metrics", {"labeled.jsonl", "splits.json"});
  ws.record("style_metrics.csv", "metrics",
            {"lm.tsv", "corpus.jsonl", c.dale_chall.string(), c.lexicon_positive.string(), c.lexicon_negative.string()});
  out << "language model: order " << lm.order() << ", " << lm.vocab_size() << " types from " << human_docs.size()
      << " human reviews; scored " << pool.size() << " reviews\n";
}

void cmd_analyze(const RunConfig& c, std::ostream& out) {
  Workspace ws(c.out_dir, c.seed);
  const auto flags_path = ws.require("flags.csv", "infer");
  const auto calibration = Calibration::load(ws.require("calibration.json", "calibrate"));
  const auto style_path = ws.require("style_metrics.csv", "metrics");
  const auto corpus = load_reviews(ws.require("corpus.jsonl", "ingest"), Format::jsonl);
  const auto pool = filter_inference_pool(corpus, c.cutoff_year);

  std::ifstream flags_in(flags_path, std::ios::binary);
  const auto rows = csv::read(flags_in);
  const auto labels = calibration.sweep_labels();
  std::vector<std::string> expected = {"id", "score"};
  expected.insert(expected.end(), labels.begin(), labels.end());
  if (rows.empty() || rows.front().fields != expected) {
    throw DataError("flags.csv does not match calibration.json; rerun `fakerev infer`");
  }
  if (rows.size() - 1 != pool.size()) throw DataError("flags.csv does not cover the inference pool; rerun `fakerev infer`");
  std::vector<SweepColumn> sweep;
  for (std::size_t t = 0; t < labels.size(); ++t) sweep.push_back({labels[t], calibration.sweep[t], {}, 0.0});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != expected.size() || f[0] != pool[i - 1].id) {
      throw DataError("flags.csv line " + std::to_string(rows[i].line) + " does not match the inference pool");
    }
    for (std::size_t t = 0; t < labels.size(); ++t) sweep[t].flags.push_back(f[2 + t] == "1" ? 1 : 0);
  }
  for (auto& col : sweep) {
    const auto n = std::count(col.flags.begin(), col.flags.end(), std::uint8_t{1});
    col.flagged_fraction = col.flags.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(col.flags.size());
  }

  std::ifstream style_in(style_path, std::ios::binary);
  const auto style_rows = read_style_csv(style_in);
  if (style_rows.size() != pool.size()) throw DataError("style_metrics.csv does not cover the inference pool; rerun `fakerev metrics`");
  std::vector<StyleMetricVector> style;
  for (std::size_t i = 0; i < style_rows.size(); ++i) {
    if (style_rows[i].id != pool[i].id) throw DataError("style_metrics.csv is out of step with the inference pool");
    style.push_back(style_rows[i].metrics);
  }

  const auto vars = build_variable_table(pool, style, chain_status(corpus));
  const auto table = sensitivity(vars, sweep);
  {
    auto s = create(ws.path("sensitivity.csv"));
    write_sensitivity_csv(s, table);
  }
  {
    auto s = create(ws.path("table4.txt"));
    write_sensitivity_text(s, table);
  }
  const auto figures = write_figure_csvs(c.out_dir, table, vars, sweep);
  const std::vector<std::string> inputs = {"flags.csv", "calibration.json", "style_metrics.csv", "corpus.jsonl"};
  ws.record("sensitivity.csv", "analyze", inputs);
  ws.record("table4.txt", "analyze", inputs);
  for (const auto& f : figures) ws.record(f.filename().string(), "analyze", inputs);
  out << "sensitivity analysis over " << pool.size() << " reviews, " << vars.names.size() << " variables, "
      << sweep.size() << " thresholds -> " << ws.path("table4.txt").string() << '\n';
}

void cmd_survey_build(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  Workspace ws(c.out_dir, c.seed);
  ReviewSet humans;
  ReviewSet fakes;
  std::vector<std::string> inputs;
  if (!o.humans.empty() || !o.fakes.empty()) {
    if (o.humans.empty() || o.fakes.empty()) throw UsageError("survey build: give both --humans and --fakes");
    for (const auto& p : {o.humans, o.fakes}) {
      require_input(p, "review file");
      if (!format_from_path(p)) throw UsageError("cannot tell the format of '" + p.string() + "'");
    }
    humans = load_reviews(o.humans, *format_from_path(o.humans));
    fakes = load_reviews(o.fakes, *format_from_path(o.fakes));
    inputs = {o.humans.string(), o.fakes.string()};
  } else {
    const auto labeled = load_reviews(ws.require("labeled.jsonl", "generate"), Format::jsonl);
    const auto test = subset(labeled, load_splits(ws.require("splits.json", "train")).test);
    std::vector<Review> h, f;
    for (const auto& r : test.reviews()) (r.label == Label::fake ? f : h).push_back(r);
    humans = ReviewSet(std::move(h));
    fakes = ReviewSet(std::move(f));
    inputs = {"labeled.jsonl", "splits.json"};
  }
  const auto form = build_survey(humans, fakes, c.seed);
  form.save(ws.path("survey_form.json"));
  ws.record("survey_form.json", "survey build", inputs);
  out << "survey form: " << form.questions.size() << " questions (" << kAttentionChecks << " attention checks), "
      << form.training.size() << " training pairs\n";
}

void cmd_survey_score(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  Workspace ws(c.out_dir, c.seed);
  if (o.responses.empty()) throw UsageError("survey score: --responses is required");
  const auto form_path = o.form.empty() ? ws.require("survey_form.json", "survey build") : o.form;
  require_input(form_path, "survey form");
  require_input(o.responses, "responses file");
  const auto form = SurveyForm::load(form_path);
  std::ifstream in(o.responses, std::ios::binary);
  const auto score = score_survey(form, read_responses(in));
  {
    auto s = create(ws.path("survey_report.txt"));
    write_survey_report(s, score);
  }
  const std::vector<std::string> inputs = {form_path.string(), o.responses.string()};
  ws.record("survey_report.txt", "survey score", inputs);
  if (score.tukey) {
    auto s = create(ws.path("survey_tukey.csv"));
    write_tukey_csv(s, *score.tukey);
    s.close();
    ws.record("survey_tukey.csv", "survey score", inputs);
  }
  write_survey_report(out, score);
}

}  // namespace fakerev::app
