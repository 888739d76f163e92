#pragma once

#include <string>
#include <vector>

namespace viscoflow {

/// Best-of-repeats wall times for one grid size.
struct BenchRow {
  int dim = 3;
  int n = 0;
  std::size_t cells = 0;
  double operator_seconds = 0.0;   // vector Laplacian + gradient
  double transport_seconds = 0.0;  // trace + density + deformation advection
  double lame_seconds = 0.0;       // one FFT-preconditioned solve
  int lame_iterations = 0;

  double lame_throughput() const { return static_cast<double>(cells) / lame_seconds; }
};

std::vector<BenchRow> run_bench(int dim, const std::vector<int>& sizes, int repeats = 3);

/// Fixed-width table, one row per size, throughputs in cells per second.
std::string bench_table(const std::vector<BenchRow>& rows);

}  // namespace viscoflow
