#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#ifdef FAKEREV_HAS_OPENMP
#include <omp.h>
#endif

namespace fakerev {

/// Selects between the serial reference path and the OpenMP path of a
/// data-parallel kernel. Parallel results never depend on the thread count;
/// reductions may differ from the serial reference by rounding.
enum class Exec { serial, parallel };

constexpr bool openmp_enabled() noexcept {
#ifdef FAKEREV_HAS_OPENMP
  return true;
#else
  return false;
#endif
}

inline int max_threads() noexcept {
#ifdef FAKEREV_HAS_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Calls fn(i) for every i in [0, n). Iterations must be independent.
/// The first exception thrown by any iteration is rethrown on the caller.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#ifdef FAKEREV_HAS_OPENMP
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
#else
  for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

/// Fixed-size row blocks for reductions. The block layout depends only on
/// n, never on the thread count, so partial sums combine in the same order
/// on every run.
struct BlockRange {
  std::size_t begin;
  std::size_t end;
};

inline std::vector<BlockRange> make_blocks(std::size_t n, std::size_t block_size) {
  std::vector<BlockRange> blocks;
  for (std::size_t b = 0; b < n; b += block_size) blocks.push_back({b, b + block_size < n ? b + block_size : n});
  return blocks;
}

}  // namespace fakerev
