#include "fakerev/random.hpp"

#include <cmath>
#include <numbers>

namespace fakerev {

double Rng::normal(double mean, double sd) {
  double u1 = unit();
  while (u1 <= 0.0) u1 = unit();
  const double u2 = unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sd * r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fakerev
