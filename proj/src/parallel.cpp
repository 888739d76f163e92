#include "viscoflow/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace viscoflow {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {

double pairwise_combine(std::vector<double>& partials) {
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) partials[i] = partials[2 * i] + partials[2 * i + 1];
    if (n % 2 == 1) partials[half] = partials[n - 1];
    n = half + n % 2;
  }
  return partials[0];
}

}  // namespace detail

double deterministic_sum(std::span<const double> values) {
  return deterministic_sum_of(values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace viscoflow
