#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace viscoflow {

void set_thread_count(int threads);
int thread_count();

/// Calls fn(begin, end) over disjoint chunks of [0, n), possibly concurrently.
/// fn must only write to outputs indexed inside its chunk.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn);

/// Sum with a fixed reduction tree: fixed-size blocks summed left to right,
/// block partials combined pairwise. The result is bit-identical for any
/// thread count.
double deterministic_sum(std::span<const double> values);

/// deterministic_sum of f(i) for i in [0, n).
template <typename Fn>
double deterministic_sum_of(std::size_t n, Fn&& f);

/// Max over f(i), i in [0, n); returns 0 for n == 0.
template <typename Fn>
double max_of(std::size_t n, Fn&& f);

namespace detail {
inline constexpr std::size_t kReduceBlock = 2048;
double pairwise_combine(std::vector<double>& partials);
}  // namespace detail

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  constexpr std::size_t kChunk = 1024;
  const auto chunks = static_cast<std::int64_t>((n + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kChunk;
    const std::size_t e = b + kChunk < n ? b + kChunk : n;
    fn(b, e);
  }
}

template <typename Fn>
double deterministic_sum_of(std::size_t n, Fn&& f) {
  const std::size_t blocks = (n + detail::kReduceBlock - 1) / detail::kReduceBlock;
  std::vector<double> partials(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(blocks); ++bi) {
    const std::size_t b = static_cast<std::size_t>(bi) * detail::kReduceBlock;
    const std::size_t e = b + detail::kReduceBlock < n ? b + detail::kReduceBlock : n;
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += f(i);
    partials[static_cast<std::size_t>(bi)] = s;
  }
  return detail::pairwise_combine(partials);
}

template <typename Fn>
double max_of(std::size_t n, Fn&& f) {
  double m = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f(i);
    if (first || v > m) {
      m = v;
      first = false;
    }
  }
  return m;
}

}  // namespace viscoflow
