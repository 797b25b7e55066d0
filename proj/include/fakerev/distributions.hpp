#pragma once

#include <limits>

namespace fakerev {

inline constexpr double kInfiniteDf = std::numeric_limits<double>::infinity();

/// Regularised incomplete beta I_x(a, b), by continued fraction.
double ibeta(double a, double b, double x);

double normal_cdf(double x);

/// P(F > f) for the F(d1, d2) distribution.
double f_sf(double f, double d1, double d2);

double t_cdf(double t, double df);
/// Inverse of t_cdf for p in (0, 1).
double t_quantile(double p, double df);

/// CDF of the studentized range for k groups and df degrees of freedom
/// (df may be kInfiniteDf). Computed by Gauss-Legendre quadrature: an inner
/// integral over the normal variable and, for finite df, an outer one over
/// the scale of the chi variable.
double ptukey(double q, int k, double df);

/// Studentized-range quantile: the q with ptukey(q, k, df) = p.
double qtukey(double p, int k, double df);

}  // namespace fakerev
