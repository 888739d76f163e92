#include "viscoflow/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "viscoflow/initial.hpp"
#include "viscoflow/lame.hpp"
#include "viscoflow/operators.hpp"
#include "viscoflow/transport.hpp"

namespace viscoflow {
namespace {

template <class Fn>
double best_time(int repeats, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> el = std::chrono::steady_clock::now() - t0;
    best = std::min(best, el.count());
  }
  return best;
}

}  // namespace

std::vector<BenchRow> run_bench(int dim, const std::vector<int>& sizes, int repeats) {
  if (repeats < 1) throw PreconditionError("bench needs repeats >= 1");
  std::vector<BenchRow> rows;
  for (int n : sizes) {
    const Grid grid(dim, n);
    State s = random_smooth_state(grid, 0.2, 7);
    BenchRow row{dim, n, grid.size()};

    row.operator_seconds = best_time(repeats, [&] {
      const VectorField lap = apply_laplacian(s.u);
      const TensorField g = apply_gradient(s.u);
      (void)lap;
      (void)g;
    });

    const double dt = 0.1 * grid.h(0);
    row.transport_seconds = best_time(repeats, [&] {
      const DeparturePoints dp = trace_departure_points(s.u, dt);
      const ScalarField r = advect_density(s.rho, dp);
      const TensorField F = advect_deformation(s.F, dp);
      (void)r;
      (void)F;
    });

    LameProblem p{s.rho, 1.0, 0.5, 0.01, apply_laplacian(s.u), VectorField(grid)};
    row.lame_seconds = best_time(repeats, [&] {
      const LameSolution sol = solve_momentum(p, 1e-10, 1000, Preconditioner::kFftConstantCoefficient);
      row.lame_iterations = sol.stats.iterations;
    });
    rows.push_back(row);
  }
  return rows;
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::string out = "dim     n       cells   operator_cells/s  transport_cells/s  lame_cells/s  lame_iters  lame_s\n";
  char buf[256];
  for (const auto& r : rows) {
    const double c = static_cast<double>(r.cells);
    std::snprintf(buf, sizeof buf, "%3d %5d %11zu %18.6e %18.6e %13.6e %11d %7.4f\n", r.dim, r.n, r.cells,
                  c / r.operator_seconds, c / r.transport_seconds, c / r.lame_seconds, r.lame_iterations,
                  r.lame_seconds);
    out += buf;
  }
  return out;
}

}  // namespace viscoflow
