#include "fakerev/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fakerev/error.hpp"

namespace fakerev {
namespace {

constexpr int kGaussPoints = 16;

struct GaussRule {
  std::array<double, kGaussPoints> nodes;
  std::array<double, kGaussPoints> weights;
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre polynomial.
GaussRule make_rule() {
  GaussRule rule{};
  constexpr int n = kGaussPoints;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

template <typename Fn>
double integrate(double lo, double hi, int panels, Fn&& fn) {
  const auto& r = rule();
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    double s = 0.0;
    for (int i = 0; i < kGaussPoints; ++i) s += r.weights[i] * fn(mid + half * r.nodes[i]);
    total += s * half;
  }
  return total;
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10'000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h;
}

// P(range of k standard normals <= q).
double range_cdf_normal(double q, int k) {
  if (q <= 0.0) return 0.0;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double lo = -8.5;
  const double hi = 8.5 + q;
  const int panels = static_cast<int>(std::ceil(0.5 * (hi - lo)));
  const double v = integrate(lo, hi, panels, [&](double z) {
    const double band = normal_cdf(z) - normal_cdf(z - q);
    return inv_sqrt_2pi * std::exp(-0.5 * z * z) * std::pow(band, k - 1);
  });
  return std::min(1.0, k * v);
}

// Root of an increasing function on [lo, hi] with fn(lo) < 0 < fn(hi),
// by the Illinois variant of regula falsi.
template <typename Fn>
double increasing_root(double lo, double hi, Fn&& fn) {
  double flo = fn(lo);
  double fhi = fn(hi);
  int side = 0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
    const double x = (lo * fhi - hi * flo) / (fhi - flo);
    const double fx = fn(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ibeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("ibeta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw PreconditionError("ibeta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast for x < (a + 1) / (a + b + 2); use the
  // symmetry I_x(a, b) = 1 - I_{1-x}(b, a) on the other side.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw PreconditionError("f_sf: degrees of freedom must be positive");
  if (std::isnan(f) || f < 0.0) throw PreconditionError("f_sf: f must be >= 0");
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return ibeta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

double t_cdf(double t, double df) {
  if (!(df > 0.0)) throw PreconditionError("t_cdf: df must be positive");
  if (std::isinf(df)) return normal_cdf(t);
  const double tail = 0.5 * ibeta(0.5 * df, 0.5, df / (df + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("t_quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);
  double lo = 0.0;
  double hi = 1.0;
  while (t_cdf(hi, df) < p) hi *= 2.0;
  return increasing_root(lo, hi, [&](double t) { return t_cdf(t, df) - p; });
}

double ptukey(double q, int k, double df) {
  if (k < 2) throw PreconditionError("ptukey: k must be >= 2");
  if (!(df >= 1.0)) throw PreconditionError("ptukey: df must be >= 1");
  if (std::isnan(q)) throw PreconditionError("ptukey: q is NaN");
  if (q <= 0.0) return 0.0;
  if (std::isinf(q)) return 1.0;
  if (std::isinf(df)) return range_cdf_normal(q, k);

  // s = sqrt(chi2_df / df) has log density
  //   (df/2) log(df) - lgamma(df/2) - (df/2 - 1) log 2 + (df - 1) log s - df s^2 / 2.
  const double c = 0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::log(2.0);
  auto log_density = [&](double s) { return c + (df - 1.0) * std::log(s) - 0.5 * df * s * s; };
  const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.0;
  const double peak = mode > 0.0 ? log_density(mode) : c;
  const double step = 0.5 / std::sqrt(df);
  double hi = std::max(mode, 1.0);
  while (log_density(hi) - peak > -60.0) hi += step;
  double lo = mode;
  while (lo > 0.0 && log_density(lo) - peak > -60.0) lo = std::max(0.0, lo - step);
  const int panels = std::max(16, static_cast<int>(std::ceil((hi - lo) / step)));
  const double v = integrate(lo, hi, panels, [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(log_density(s)) * range_cdf_normal(q * s, k);
  });
  return std::clamp(v, 0.0, 1.0);
}

double qtukey(double p, int k, double df) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("qtukey: p must lie in (0, 1)");
  double lo = 0.0;
  double hi = 2.0;
  while (ptukey(hi, k, df) < p) hi *= 2.0;
  return increasing_root(lo, hi, [&](double q) { return ptukey(q, k, df) - p; });
}

}  // namespace fakerev
