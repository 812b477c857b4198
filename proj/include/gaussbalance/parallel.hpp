#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <type_traits>
#include <vector>

namespace gaussbalance {

/// Execution policy for grid kernels. `serial` is the reference path the
/// tests compare the OpenMP path against.
enum class Exec { serial, parallel };

/// Applies GAUSSBALANCE_THREADS (if set) as the OpenMP thread cap.
/// Returns the thread count in effect.
int configure_threads_from_env();

/// Independent per-item stream: item i of a seeded suite sees the same
/// numbers whatever order or thread evaluates it.
std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t index);

/// out[i] = f(i) for i in [0, n). Every element is written by exactly one
/// iteration, so the result does not depend on the thread count.
template <class F>
auto parallel_map(std::size_t n, const F& f, Exec exec = Exec::parallel)
    -> std::vector<decltype(f(std::size_t{}))> {
  using T = decltype(f(std::size_t{}));
  static_assert(!std::is_same_v<T, bool>, "vector<bool> elements are not independently writable");
  std::vector<T> out(n);
  const long long count = static_cast<long long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace gaussbalance
