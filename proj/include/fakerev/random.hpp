#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace fakerev {

/// 64-bit FNV-1a. Used for seed derivation and artifact fingerprints, so the
/// value must stay stable across platforms and releases.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seeded random source with platform-independent output.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so bounded integers and reals are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling on the top of the range keeps the result unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform real in [lo, hi].
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) / static_cast<double>((1ULL << 53) - 1);
    return lo + (hi - lo) * u;
  }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Standard normal draw (Box-Muller, one value per call).
  double normal(double mean = 0.0, double sd = 1.0);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Seed for a sub-stream keyed by a string (e.g. a review id).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view key) noexcept {
  std::uint64_t h = fnv1a64(key);
  h ^= base + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace fakerev
