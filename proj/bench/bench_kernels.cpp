// Serial reference vs OpenMP path for the data-parallel kernels. The second
// benchmark argument selects the path: 0 serial, 1 parallel.
#include <benchmark/benchmark.h>

#include "fakerev/calibration.hpp"
#include "fakerev/detect.hpp"
#include "fakerev/lm.hpp"
#include "fakerev/stats.hpp"
#include "fakerev/stylometrics.hpp"
#include "fakerev/synthetic.hpp"
#include "fakerev/text.hpp"

using namespace fakerev;
using Strings = std::vector<std::string>;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

struct Corpus {
  std::vector<Strings> docs;
  Labels labels;
  DocTermMatrix x;
};

const Corpus& corpus(std::size_t n) {
  static std::map<std::size_t, Corpus> cache;
  auto& c = cache[n];
  if (c.docs.empty()) {
    for (const auto& r : synthetic::two_topic_corpus(1, n)) {
      c.docs.push_back(tokenize_words(r.text));
      c.labels.push_back(r.label == Label::fake);
    }
    c.x = vectorize(c.docs).first;
  }
  return c;
}

void BM_Vectorize(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vectorize(c.docs, nullptr, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LogisticGradient(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> w(c.x.n_terms(), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(logistic_loss_gradient(c.x, c.labels, w, 0.0, 0.1, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScoreAll(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  const auto model = train_nb(c.x, c.labels, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(model.score_all(c.x, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CrossValidate(benchmark::State& state) {
  const auto& c = corpus(static_cast<std::size_t>(state.range(0)));
  const Trainer nb = [](const DocTermMatrix& x, std::span<const std::uint8_t> y, double a) { return train_nb(x, y, a); };
  for (auto _ : state) benchmark::DoNotOptimize(cross_validate(c.x, c.labels, kNbAlphaGrid, 5, 1, nb, exec_of(state)));
}

void BM_StyleMetrics(benchmark::State& state) {
  static const auto pool = synthetic::planted_pool(3, {static_cast<std::size_t>(state.range(0)), 50}).reviews;
  static const auto familiar = WordList::load(FAKEREV_DATA_DIR "/dale_chall.txt");
  static const auto lexicon =
      LexiconSentiment::load(FAKEREV_DATA_DIR "/lexicon/positive.txt", FAKEREV_DATA_DIR "/lexicon/negative.txt");
  std::vector<Strings> docs;
  for (const auto& r : pool) docs.push_back(tokenize_words(r.text));
  const auto lm = NGramModel::train(docs);
  const StyleScorer scorer{lm, familiar, lexicon, 1};
  for (auto _ : state) benchmark::DoNotOptimize(score_reviews(pool, scorer, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pool.size()));
}

void BM_Sensitivity(benchmark::State& state) {
  static const auto pool = synthetic::planted_pool(4, {static_cast<std::size_t>(state.range(0)), 500});
  static const std::vector<StyleMetricVector> style(pool.reviews.size());
  const auto vars = build_variable_table(pool.reviews, style, chain_status(pool.reviews));
  std::vector<double> scores;
  for (auto p : pool.planted) scores.push_back(p ? 0.8 : 0.3);
  Calibration cal;
  cal.j_star = 0.55;
  cal.sweep = {0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 0.55};
  const auto sweep = classify_sweep(scores, cal);
  for (auto _ : state) benchmark::DoNotOptimize(sensitivity(vars, sweep, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_Vectorize)->ArgsProduct({{20000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogisticGradient)->ArgsProduct({{20000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreAll)->ArgsProduct({{20000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->ArgsProduct({{4000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StyleMetrics)->ArgsProduct({{500}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sensitivity)->ArgsProduct({{4000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
