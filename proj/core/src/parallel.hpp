#pragma once

// Manual static split of an index range over an OpenMP team, with per-thread
// wall time recorded.

#include <omp.h>

#include <span>
#include <type_traits>
#include <utility>

namespace eowilson::detail {

inline std::pair<int, int> split_range(int n, int parts, int part) {
  const long long lo = static_cast<long long>(n) * part / parts;
  const long long hi = static_cast<long long>(n) * (part + 1) / parts;
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

// body(begin, end) runs once per thread on its share of [0, n).
template <class Body>
void parallel_blocks(int n, int threads, std::span<double> thread_seconds, Body&& body) {
  if (threads <= 1) {
    const double t0 = omp_get_wtime();
    body(0, n);
    if (!thread_seconds.empty()) thread_seconds[0] += omp_get_wtime() - t0;
    return;
  }
#pragma omp parallel num_threads(threads)
  {
    const int tid = omp_get_thread_num();
    const int team = omp_get_num_threads();
    const double t0 = omp_get_wtime();
    const auto [lo, hi] = split_range(n, team, tid);
    body(lo, hi);
    if (tid < static_cast<int>(thread_seconds.size())) thread_seconds[tid] += omp_get_wtime() - t0;
  }
}

// Calls f(std::integral_constant<int, mu>) for a runtime direction.
template <class F>
decltype(auto) with_direction(int mu, F&& f) {
  switch (mu) {
    case 0: return f(std::integral_constant<int, 0>{});
    case 1: return f(std::integral_constant<int, 1>{});
    case 2: return f(std::integral_constant<int, 2>{});
    default: return f(std::integral_constant<int, 3>{});
  }
}

}  // namespace eowilson::detail
