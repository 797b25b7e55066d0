#include "fakerev/detect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "fakerev/error.hpp"
#include "fakerev/random.hpp"

namespace fakerev {
namespace {

constexpr std::string_view kFormatTag = "#fakerev-detector v1";
constexpr std::size_t kRowBlock = 256;

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double dot_row(std::span<const TermCount> row, std::span<const double> w) {
  double z = 0.0;
  for (const auto& e : row) z += w[e.term] * static_cast<double>(e.count);
  return z;
}

void check_labels(const DocTermMatrix& x, std::span<const std::uint8_t> y, const char* op) {
  if (y.size() != x.n_docs()) throw PreconditionError(std::string(op) + ": label count does not match document count");
  for (auto v : y) {
    if (v > 1) throw PreconditionError(std::string(op) + ": labels must be 0 (real) or 1 (fake)");
  }
}

bool both_classes(std::span<const std::uint8_t> y) {
  const auto fakes = std::count(y.begin(), y.end(), std::uint8_t{1});
  return fakes > 0 && static_cast<std::size_t>(fakes) < y.size();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view to_string(DetectorKind kind) noexcept {
  return kind == DetectorKind::naive_bayes ? "naive_bayes" : "logistic_regression";
}

DetectorModel::DetectorModel(NaiveBayesParams params, std::uint64_t vocab_fingerprint, std::string features)
    : params_(std::move(params)), vocab_fingerprint_(vocab_fingerprint), features_(std::move(features)) {
  const auto& p = std::get<NaiveBayesParams>(params_);
  if (p.log_likelihood[0].size() != p.log_likelihood[1].size()) {
    throw PreconditionError("naive Bayes: per-class tables differ in length");
  }
}

DetectorModel::DetectorModel(LogisticParams params, std::uint64_t vocab_fingerprint, std::string features)
    : params_(std::move(params)), vocab_fingerprint_(vocab_fingerprint), features_(std::move(features)) {}

DetectorKind DetectorModel::kind() const noexcept {
  return std::holds_alternative<NaiveBayesParams>(params_) ? DetectorKind::naive_bayes
                                                           : DetectorKind::logistic_regression;
}

std::size_t DetectorModel::n_terms() const noexcept {
  if (const auto* nb = naive_bayes()) return nb->log_likelihood[0].size();
  return logistic()->weights.size();
}

double DetectorModel::score(std::span<const TermCount> row) const {
  if (const auto* nb = naive_bayes()) {
    double l0 = nb->log_prior[0];
    double l1 = nb->log_prior[1];
    for (const auto& e : row) {
      l0 += nb->log_likelihood[0][e.term] * e.count;
      l1 += nb->log_likelihood[1][e.term] * e.count;
    }
    return sigmoid(l1 - l0);
  }
  const auto* lr = logistic();
  return sigmoid(dot_row(row, lr->weights) + lr->bias);
}

std::vector<double> DetectorModel::score_all(const DocTermMatrix& matrix, Exec exec) const {
  if (matrix.n_terms() != n_terms()) throw PreconditionError("detector: matrix width does not match the model");
  std::vector<double> out(matrix.n_docs());
  for_each_index(matrix.n_docs(), exec, [&](std::size_t d) { out[d] = score(matrix.row(d)); });
  return out;
}

void DetectorModel::check_vocabulary(const Vocabulary& vocab) const {
  if (vocab.size() != n_terms() || vocab.fingerprint() != vocab_fingerprint_) {
    throw DataError("detector model was trained on a different vocabulary (fingerprint " + hex64(vocab_fingerprint_) +
                    ", got " + hex64(vocab.fingerprint()) + ")");
  }
}

void DetectorModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << kFormatTag << '\n';
  out << "kind\t" << to_string(kind()) << '\n';
  out << "features\t" << features_ << '\n';
  out << "n_terms\t" << n_terms() << '\n';
  out << "vocab_fnv1a64\t" << hex64(vocab_fingerprint_) << '\n';
  if (const auto* nb = naive_bayes()) {
    out << "alpha\t" << fmt(nb->alpha) << '\n';
    out << "log_prior\t" << fmt(nb->log_prior[0]) << '\t' << fmt(nb->log_prior[1]) << '\n';
    out << "params\n";
    for (std::size_t t = 0; t < n_terms(); ++t) {
      out << t << '\t' << fmt(nb->log_likelihood[0][t]) << '\t' << fmt(nb->log_likelihood[1][t]) << '\n';
    }
    return;
  }
  const auto* lr = logistic();
  out << "lambda\t" << fmt(lr->lambda) << '\n';
  out << "step\t" << fmt(lr->schedule.step) << '\n';
  out << "tolerance\t" << fmt(lr->schedule.tolerance) << '\n';
  out << "max_iterations\t" << lr->schedule.max_iterations << '\n';
  out << "converged\t" << (lr->converged ? 1 : 0) << '\n';
  out << "iterations\t" << lr->iterations << '\n';
  out << "gradient_norm\t" << fmt(lr->gradient_norm) << '\n';
  out << "final_step\t" << fmt(lr->final_step) << '\n';
  out << "bias\t" << fmt(lr->bias) << '\n';
  out << "params\n";
  for (std::size_t t = 0; t < n_terms(); ++t) out << t << '\t' << fmt(lr->weights[t]) << '\n';
}

DetectorModel DetectorModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::size_t n = 0;
  auto fail = [&](const std::string& why) { return DataError(path.string() + ": line " + std::to_string(n) + ": " + why); };
  std::string line;
  if (!std::getline(in, line) || line != kFormatTag) {
    n = 1;
    throw fail("missing format tag");
  }
  n = 1;
  std::map<std::string, std::vector<std::string>> header;
  while (std::getline(in, line)) {
    ++n;
    if (line == "params") break;
    std::istringstream ss(line);
    std::string key;
    std::string value;
    std::getline(ss, key, '\t');
    while (std::getline(ss, value, '\t')) header[key].push_back(value);
    if (header[key].empty()) throw fail("header '" + key + "' has no value");
  }
  auto get = [&](const std::string& key, std::size_t i = 0) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end() || it->second.size() <= i) throw fail("missing header '" + key + "'");
    return it->second[i];
  };
  auto real = [&](const std::string& s) {
    double v = 0;
    if (std::from_chars(s.data(), s.data() + s.size(), v).ec != std::errc{}) throw fail("bad number '" + s + "'");
    return v;
  };
  auto count = [&](const std::string& s) {
    std::size_t v = 0;
    if (std::from_chars(s.data(), s.data() + s.size(), v).ec != std::errc{}) throw fail("bad integer '" + s + "'");
    return v;
  };
  const std::size_t terms = count(get("n_terms"));
  std::uint64_t fingerprint = 0;
  {
    const auto& h = get("vocab_fnv1a64");
    if (std::from_chars(h.data(), h.data() + h.size(), fingerprint, 16).ec != std::errc{}) throw fail("bad fingerprint");
  }
  const std::string kind = get("kind");
  const std::string features = get("features");
  const std::size_t columns = kind == "naive_bayes" ? 2 : 1;
  if (kind != "naive_bayes" && kind != "logistic_regression") throw fail("unknown kind '" + kind + "'");

  std::vector<std::vector<double>> cols(columns, std::vector<double>(terms, 0.0));
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++n;
    std::istringstream ss(line);
    std::string field;
    std::getline(ss, field, '\t');
    if (count(field) != rows) throw fail("parameter rows out of order");
    for (std::size_t c = 0; c < columns; ++c) {
      if (!std::getline(ss, field, '\t')) throw fail("missing parameter column");
      if (rows >= terms) throw fail("more parameter rows than n_terms");
      cols[c][rows] = real(field);
    }
    ++rows;
  }
  if (rows != terms) throw fail("expected " + std::to_string(terms) + " parameter rows, found " + std::to_string(rows));

  if (kind == "naive_bayes") {
    NaiveBayesParams p;
    p.alpha = real(get("alpha"));
    p.log_prior = {real(get("log_prior", 0)), real(get("log_prior", 1))};
    p.log_likelihood = {std::move(cols[0]), std::move(cols[1])};
    return DetectorModel(std::move(p), fingerprint, features);
  }
  LogisticParams p;
  p.lambda = real(get("lambda"));
  p.schedule.step = real(get("step"));
  p.schedule.tolerance = real(get("tolerance"));
  p.schedule.max_iterations = count(get("max_iterations"));
  p.converged = get("converged") == "1";
  p.iterations = count(get("iterations"));
  p.gradient_norm = real(get("gradient_norm"));
  p.final_step = real(get("final_step"));
  p.bias = real(get("bias"));
  p.weights = std::move(cols[0]);
  return DetectorModel(std::move(p), fingerprint, features);
}

DetectorModel train_nb(const DocTermMatrix& x, std::span<const std::uint8_t> y, double alpha,
                       std::uint64_t vocab_fingerprint) {
  check_labels(x, y, "train_nb");
  if (!(alpha > 0.0)) throw PreconditionError("train_nb: alpha must be > 0");
  if (!both_classes(y)) throw PreconditionError("train_nb: training set must contain both classes");

  const std::size_t v = x.n_terms();
  std::array<std::vector<double>, 2> counts{std::vector<double>(v, 0.0), std::vector<double>(v, 0.0)};
  std::array<double, 2> totals{};
  std::array<double, 2> docs{};
  for (std::size_t d = 0; d < x.n_docs(); ++d) {
    const int c = y[d];
    docs[c] += 1.0;
    for (const auto& e : x.row(d)) {
      counts[c][e.term] += e.count;
      totals[c] += e.count;
    }
  }
  NaiveBayesParams p;
  p.alpha = alpha;
  const double n = static_cast<double>(x.n_docs());
  for (int c = 0; c < 2; ++c) {
    p.log_prior[c] = std::log(docs[c] / n);
    const double denom = std::log(totals[c] + alpha * static_cast<double>(v));
    p.log_likelihood[c].resize(v);
    for (std::size_t t = 0; t < v; ++t) p.log_likelihood[c][t] = std::log(counts[c][t] + alpha) - denom;
  }
  return DetectorModel(std::move(p), vocab_fingerprint);
}

LossGradient logistic_loss_gradient(const DocTermMatrix& x, std::span<const std::uint8_t> y,
                                    std::span<const double> w, double b, double lambda, Exec exec) {
  const std::size_t n = x.n_docs();
  const std::size_t v = x.n_terms();
  LossGradient out;
  out.grad_w.assign(v, 0.0);
  if (n == 0) throw PreconditionError("logistic loss: no documents");
  const double inv_n = 1.0 / static_cast<double>(n);

  if (exec == Exec::serial) {
    double loss = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      const auto row = x.row(d);
      const double z = dot_row(row, w) + b;
      loss += y[d] ? softplus(-z) : softplus(z);
      const double r = sigmoid(z) - y[d];
      for (const auto& e : row) out.grad_w[e.term] += r * e.count;
      out.grad_b += r;
    }
    out.loss = loss * inv_n;
  } else {
    const auto blocks = make_blocks(n, kRowBlock);
    std::vector<double> block_loss(blocks.size(), 0.0);
    std::vector<double> block_gb(blocks.size(), 0.0);
    std::vector<std::vector<double>> block_gw(blocks.size());
    for_each_index(blocks.size(), exec, [&](std::size_t k) {
      auto& gw = block_gw[k];
      gw.assign(v, 0.0);
      double loss = 0.0;
      double gb = 0.0;
      for (std::size_t d = blocks[k].begin; d < blocks[k].end; ++d) {
        const auto row = x.row(d);
        const double z = dot_row(row, w) + b;
        loss += y[d] ? softplus(-z) : softplus(z);
        const double r = sigmoid(z) - y[d];
        for (const auto& e : row) gw[e.term] += r * e.count;
        gb += r;
      }
      block_loss[k] = loss;
      block_gb[k] = gb;
    });
    double loss = 0.0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      loss += block_loss[k];
      out.grad_b += block_gb[k];
      for (std::size_t t = 0; t < v; ++t) out.grad_w[t] += block_gw[k][t];
    }
    out.loss = loss * inv_n;
  }

  double penalty = 0.0;
  for (std::size_t t = 0; t < v; ++t) {
    out.grad_w[t] = out.grad_w[t] * inv_n + lambda * w[t];
    penalty += w[t] * w[t];
  }
  out.grad_b *= inv_n;
  out.loss += 0.5 * lambda * penalty;
  return out;
}

double logistic_loss(const DocTermMatrix& x, std::span<const std::uint8_t> y, std::span<const double> w, double b,
                     double lambda, Exec exec) {
  return logistic_loss_gradient(x, y, w, b, lambda, exec).loss;
}

DetectorModel train_lr(const DocTermMatrix& x, std::span<const std::uint8_t> y, double lambda,
                       const LrSchedule& schedule, std::uint64_t vocab_fingerprint, Exec exec) {
  check_labels(x, y, "train_lr");
  if (!(lambda >= 0.0)) throw PreconditionError("train_lr: lambda must be >= 0");
  if (!(schedule.step > 0.0)) throw PreconditionError("train_lr: step must be > 0");
  if (x.n_docs() == 0) throw PreconditionError("train_lr: no documents");

  LogisticParams p;
  p.lambda = lambda;
  p.schedule = schedule;
  p.weights.assign(x.n_terms(), 0.0);
  double step = schedule.step;

  auto norm = [](const LossGradient& g) {
    double s = g.grad_b * g.grad_b;
    for (double v : g.grad_w) s += v * v;
    return std::sqrt(s);
  };

  LossGradient current = logistic_loss_gradient(x, y, p.weights, p.bias, lambda, exec);
  std::vector<double> trial_w(p.weights.size());
  std::size_t it = 0;
  double gnorm = norm(current);
  while (gnorm >= schedule.tolerance && it < schedule.max_iterations) {
    ++it;
    for (std::size_t t = 0; t < trial_w.size(); ++t) trial_w[t] = p.weights[t] - step * current.grad_w[t];
    const double trial_b = p.bias - step * current.grad_b;
    LossGradient trial = logistic_loss_gradient(x, y, trial_w, trial_b, lambda, exec);
    if (trial.loss > current.loss) {
      step *= 0.5;
      if (step < 1e-300) break;
      continue;
    }
    p.weights.swap(trial_w);
    p.bias = trial_b;
    current = std::move(trial);
    gnorm = norm(current);
  }
  p.converged = gnorm < schedule.tolerance;
  p.iterations = it;
  p.gradient_norm = gnorm;
  p.final_step = step;
  if (!p.converged && schedule.strict) {
    throw ConvergenceError("train_lr: no convergence after " + std::to_string(it) +
                               " iterations (gradient norm " + fmt(gnorm) + ")",
                           gnorm);
  }
  return DetectorModel(std::move(p), vocab_fingerprint);
}

CvResult cross_validate(const DocTermMatrix& x, std::span<const std::uint8_t> y, std::span<const double> grid,
                        std::size_t k, std::uint64_t seed, const Trainer& trainer, Exec exec) {
  check_labels(x, y, "cross_validate");
  if (k < 2) throw PreconditionError("cross_validate: k must be >= 2");
  if (grid.empty()) throw PreconditionError("cross_validate: empty grid");
  if (x.n_docs() < k) throw PreconditionError("cross_validate: fewer documents than folds");

  std::vector<std::size_t> order(x.n_docs());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span(order));
  std::vector<std::vector<std::size_t>> train_idx(k);
  std::vector<std::vector<std::size_t>> valid_idx(k);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t fold = i % k;
    for (std::size_t f = 0; f < k; ++f) (f == fold ? valid_idx[f] : train_idx[f]).push_back(order[i]);
  }
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(train_idx[f].begin(), train_idx[f].end());
    std::sort(valid_idx[f].begin(), valid_idx[f].end());
  }

  CvResult result;
  result.candidates.assign(grid.begin(), grid.end());
  std::vector<char> fold_ok(k, 1);
  std::vector<DocTermMatrix> train_x(k);
  std::vector<Labels> train_y(k);
  for (std::size_t f = 0; f < k; ++f) {
    train_x[f] = x.select_rows(train_idx[f]);
    for (auto d : train_idx[f]) train_y[f].push_back(y[d]);
    if (!both_classes(train_y[f])) {
      fold_ok[f] = 0;
      result.warnings.push_back("fold " + std::to_string(f + 1) + " skipped: training part has a single class");
    }
  }

  const std::size_t jobs = grid.size() * k;
  std::vector<double> accuracy(jobs, std::numeric_limits<double>::quiet_NaN());
  for_each_index(jobs, exec, [&](std::size_t job) {
    const std::size_t c = job / k;
    const std::size_t f = job % k;
    if (!fold_ok[f]) return;
    const auto model = trainer(train_x[f], train_y[f], grid[c]);
    std::size_t correct = 0;
    for (auto d : valid_idx[f]) {
      const std::uint8_t pred = model.score(x.row(d)) >= 0.5 ? 1 : 0;
      correct += pred == y[d];
    }
    accuracy[job] = static_cast<double>(correct) / static_cast<double>(valid_idx[f].size());
  });

  double best_acc = -1.0;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const double a = accuracy[c * k + f];
      if (std::isnan(a)) continue;
      sum += a;
      ++used;
    }
    const double mean = used ? sum / static_cast<double>(used) : std::numeric_limits<double>::quiet_NaN();
    result.mean_accuracy.push_back(mean);
    result.folds_used.push_back(used);
    if (used && (mean > best_acc || (mean == best_acc && grid[c] < result.best))) {
      best_acc = mean;
      result.best = grid[c];
    }
  }
  if (best_acc < 0.0) throw PreconditionError("cross_validate: every fold was skipped");
  return result;
}

}  // namespace fakerev
