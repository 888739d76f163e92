#include "viscoflow/initial.hpp"

#include <cmath>
#include <random>

#include "viscoflow/field_io.hpp"
#include "viscoflow/operators.hpp"

namespace viscoflow {

State equilibrium_state(const Grid& grid) {
  State s{0.0, ScalarField(grid), VectorField(grid), identity_tensor(grid)};
  for (auto& x : s.rho.comp(0)) x = 1.0;
  return s;
}

State acoustic_state(const Grid& grid, double amplitude, int k) {
  State s = equilibrium_state(grid);
  s.rho = make_field<0>(grid, [&](const auto& x, int) { return 1.0 + amplitude * std::sin(k * x[0]); });
  return s;
}

State compatible_deformation_state(const Grid& grid, double amplitude, int k) {
  const int d = grid.dim();
  State s = equilibrium_state(grid);
  // psi_a = amp (0.5 sin(k x_a) + sin(k x_{a+1})); G = I - grad psi.
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto x = grid.node_position(n);
    Matrix G = Matrix::identity(d);
    for (int a = 0; a < d; ++a) {
      const int b = (a + 1) % d;
      G(a, a) -= amplitude * 0.5 * k * std::cos(k * x[a]);
      G(a, b) -= amplitude * k * std::cos(k * x[b]);
    }
    const double J = determinant(G);
    if (!(J > 0.0)) {
      throw PreconditionError("compatible-deformation: amplitude " + std::to_string(amplitude) +
                              " folds the map (det grad X <= 0)");
    }
    s.rho[n] = J;
    // F = G^{-1} = cof(G)^T / J
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double cof;
        if (d == 2) {
          // cof(G)_{ji} for 2x2
          const int r = 1 - j, c = 1 - i;
          cof = ((i + j) % 2 ? -1.0 : 1.0) * G(r, c);
        } else {
          const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
          cof = G(r0, c0) * G(r1, c1) - G(r0, c1) * G(r1, c0);
        }
        s.F.comp(i, j)[n] = cof / J;
      }
  }
  return s;
}

State incompatible_state(const Grid& grid, double amplitude, int k) {
  State s = equilibrium_state(grid);
  const int d = grid.dim();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const double f = 1.0 + amplitude * std::sin(k * grid.node_position(n)[0]);
    for (int i = 0; i < d; ++i) s.F.comp(i, i)[n] = f;
  }
  return s;
}

State random_smooth_state(const Grid& grid, double amplitude, std::uint64_t seed) {
  const int d = grid.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  constexpr int kModes = 3;
  struct Mode {
    double c;
    std::array<int, 3> k;
    double phase;
  };
  auto draw = [&] {
    std::vector<Mode> m;
    for (int i = 0; i < kModes; ++i) {
      Mode mode{U(rng) / kModes, {0, 0, 0}, 3.141592653589793 * U(rng)};
      for (int a = 0; a < d; ++a) mode.k[static_cast<std::size_t>(a)] = static_cast<int>(std::lround(1.5 * U(rng) + 1.5 * U(rng)));
      m.push_back(mode);
    }
    return m;
  };
  auto eval = [&](const std::vector<Mode>& m, const std::array<double, 3>& x) {
    double v = 0.0;
    for (const auto& mode : m) v += mode.c * std::sin(mode.k[0] * x[0] + mode.k[1] * x[1] + mode.k[2] * x[2] + mode.phase);
    return v;
  };
  const auto mr = draw();
  std::vector<std::vector<Mode>> mu, mF;
  for (int i = 0; i < d; ++i) mu.push_back(draw());
  for (int i = 0; i < d * d; ++i) mF.push_back(draw());

  State s = equilibrium_state(grid);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto x = grid.node_position(n);
    s.rho[n] = 1.0 + amplitude * eval(mr, x);
    for (int i = 0; i < d; ++i) s.u.comp(i)[n] = amplitude * eval(mu[static_cast<std::size_t>(i)], x);
    for (int c = 0; c < d * d; ++c) s.F.comp(c)[n] += amplitude * eval(mF[static_cast<std::size_t>(c)], x);
  }
  return s;
}

void add_cell_flow(State& s, double velocity, int k) {
  if (velocity == 0.0) return;
  const Grid& g = s.grid();
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto x = g.node_position(n);
    s.u.comp(0)[n] += velocity * std::sin(k * x[0]) * std::cos(k * x[1]);
    s.u.comp(1)[n] -= velocity * std::cos(k * x[0]) * std::sin(k * x[1]);
  }
}

State initial_state(const RunConfig& c) {
  const Grid grid(c.grid.dim, c.grid.n, c.grid.length);
  const auto& in = c.initial;
  State s;
  if (in.preset == "equilibrium") {
    s = equilibrium_state(grid);
  } else if (in.preset == "acoustic") {
    s = acoustic_state(grid, in.amplitude, in.wavenumber);
  } else if (in.preset == "compatible-deformation") {
    s = compatible_deformation_state(grid, in.amplitude, in.wavenumber);
  } else if (in.preset == "incompatible") {
    s = incompatible_state(grid, in.amplitude, in.wavenumber);
  } else if (in.preset == "random-smooth") {
    s = random_smooth_state(grid, in.amplitude, c.seed);
  } else if (in.preset == "file") {
    s.rho = read_raw<0>(in.rho_file, c.grid.length, &s.t);
    s.u = read_raw<1>(in.u_file, c.grid.length);
    s.F = read_raw<2>(in.F_file, c.grid.length);
    if (!(s.grid() == grid) || !(s.u.grid() == grid) || !(s.F.grid() == grid)) {
      throw ConfigError("initial field files do not match the [grid] section");
    }
  } else {
    throw ConfigError("unknown initial preset '" + in.preset + "'");
  }
  add_cell_flow(s, in.velocity, in.wavenumber);
  s.validate();
  return s;
}

}  // namespace viscoflow
