#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "fakerev/app.hpp"
#include "fakerev/error.hpp"
#include "workspace.hpp"

namespace fakerev::app {
namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> detector;
  std::optional<std::string> features;
  std::optional<std::string> gen_backend;
};

void add_globals(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "JSON config file");
  app.add_option("--seed", o.seed, "base random seed");
  app.add_option("--out-dir", o.out_dir, "directory for artifacts");
  app.add_option("--detector", o.detector, "nb or lr");
  app.add_option("--features", o.features, "words or bpe");
  app.add_option("--gen-backend", o.gen_backend, "mock, http or replay");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c;
  if (o.config) apply_config_file(c, *o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.detector) c.detector = *o.detector;
  if (o.features) c.features = *o.features;
  if (o.gen_backend) c.gen_backend = *o.gen_backend;
  c.validate();
  return c;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fake-review detection, stylometry and sensitivity analysis", "fakerev"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  add_globals(app, o);
  CommandOptions opts;

  auto* ingest = app.add_subcommand("ingest", "validate a corpus and copy it into the workspace");
  ingest->add_option("--input", opts.input, "corpus file (.jsonl or .csv); defaults to paths.corpus");
  app.add_subcommand("generate", "write AI reviews seeded by elite reviews");
  app.add_subcommand("train", "split, cross-validate and fit both detectors");
  app.add_subcommand("calibrate", "pick the Youden threshold on the validation split");
  app.add_subcommand("infer", "score and flag the inference pool at every sweep threshold");
  app.add_subcommand("metrics", "fit the language model and compute style metrics");
  app.add_subcommand("analyze", "ANOVA sensitivity table and figure data");
  auto* survey = app.add_subcommand("survey", "human-judgement survey");
  survey->require_subcommand(1);
  auto* build = survey->add_subcommand("build", "assemble the survey form");
  build->add_option("--humans", opts.humans, "human reviews to pair (default: test split)");
  build->add_option("--fakes", opts.fakes, "AI reviews to pair (default: test split)");
  auto* score = survey->add_subcommand("score", "score survey responses");
  score->add_option("--responses", opts.responses, "CSV: respondent_id,question_id,choice")->required();
  score->add_option("--form", opts.form, "survey form (default: <out-dir>/survey_form.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto config = resolve(o);
    const auto& sub = *app.get_subcommands().front();
    const std::string name = sub.get_name();
    if (name == "ingest") cmd_ingest(config, opts, out);
    else if (name == "generate") cmd_generate(config, out);
    else if (name == "train") cmd_train(config, out, err);
    else if (name == "calibrate") cmd_calibrate(config, out);
    else if (name == "infer") cmd_infer(config, out);
    else if (name == "metrics") cmd_metrics(config, out);
    else if (name == "analyze") cmd_analyze(config, out);
    else if (build->parsed()) cmd_survey_build(config, opts, out);
    else cmd_survey_score(config, opts, out);
    return 0;
  } catch (const UsageError& e) {
    err << "fakerev: " << e.what() << '\n';
    return 1;
  } catch (const ServiceError& e) {
    err << "fakerev: service error (status " << e.status() << "): " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    err << "fakerev: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "fakerev: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    err << "fakerev: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "fakerev: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace fakerev::app
