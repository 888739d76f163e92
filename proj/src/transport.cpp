#include "viscoflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "viscoflow/norms.hpp"
#include "viscoflow/operators.hpp"
#include "viscoflow/parallel.hpp"

namespace viscoflow {

double DeparturePoints::max_abs_divergence() const {
  double m = 0.0;
  for (double x : divv_mid.comp(0)) m = std::max(m, std::abs(x));
  return m;
}

DeparturePoints trace_departure_points(const VectorField& v, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("trace_departure_points: dt must be positive");
  require_finite(v, "trace_departure_points");
  const Grid& g = v.grid();
  const int d = g.dim();

  const double vmax = discrete_norm(v, NormKind::kLinf);
  double lmin = g.length(0);
  for (int a = 1; a < d; ++a) lmin = std::min(lmin, g.length(a));
  if (dt * vmax > 0.25 * lmin) {
    const double advisory = 0.25 * lmin / vmax;
    throw CflViolation(advisory, "trace_departure_points: dt*|v|_inf = " +
                                     std::to_string(dt * vmax) + " exceeds length/4; use dt <= " +
                                     std::to_string(advisory));
  }

  const ScalarField divv = apply_divergence(v);
  const TensorField gradv = apply_gradient(v);

  DeparturePoints dp{g, VectorField(g), ScalarField(g), TensorField(g), dt};
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      const Point x = g.node_position(n);
      Point xm = x;
      for (int a = 0; a < d; ++a) xm[a] = x[a] - 0.5 * dt * v.comp(a)[n];
      const CubicStencil st(g, xm);
      for (int a = 0; a < d; ++a) dp.feet.comp(a)[n] = x[a] - dt * st.apply(v.comp(a));
      dp.divv_mid[n] = st.apply(divv.comp(0));
      for (int c = 0; c < gradv.components(); ++c) dp.gradv_mid.comp(c)[n] = st.apply(gradv.comp(c));
    }
  });
  return dp;
}

ScalarField advect_density(const ScalarField& rho, const DeparturePoints& dp,
                           const TransportOptions& opts) {
  require_same_grid(rho, dp.feet, "advect_density");
  require_finite(rho, "advect_density");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) throw PreconditionError("advect_density: density must be positive");
  }
  const Grid& g = rho.grid();
  ScalarField out(g);
  bool bad = false;
  std::size_t bad_idx = 0;
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      const CubicStencil st(g, dp.foot(n));
      const double at_foot = opts.monotone_density ? st.apply_monotone(rho.comp(0)) : st.apply(rho.comp(0));
      if (!(at_foot > 0.0)) {
#pragma omp critical(viscoflow_advect_density)
        {
          if (!bad || n < bad_idx) bad_idx = n;
          bad = true;
        }
        continue;
      }
      out[n] = at_foot * std::exp(-(dp.dt * dp.divv_mid[n]));
    }
  });
  if (bad) {
    const auto m = g.multi_index(bad_idx);
    throw SolverDivergence("under_resolved",
                           "advect_density: interpolated density at the foot of cell (" +
                               std::to_string(m[0]) + "," + std::to_string(m[1]) + "," +
                               std::to_string(m[2]) + ") is nonpositive");
  }
  require_finite(out, "advect_density");
  return out;
}

Matrix matrix_exponential(const Matrix& a) {
  const double norm = a.frobenius();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  Matrix x = a;
  const double scale = std::ldexp(1.0, -squarings);
  for (double& v : x.a) v *= scale;
  Matrix result = Matrix::identity(a.dim);
  Matrix term = Matrix::identity(a.dim);
  for (int k = 1; k <= 18; ++k) {
    term = term * x;
    for (double& v : term.a) v /= static_cast<double>(k);
    for (std::size_t i = 0; i < result.a.size(); ++i) result.a[i] += term.a[i];
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Matrix deformation_propagator(const Matrix& grad_v, double dt, bool full_exponential) {
  Matrix g = grad_v;
  for (double& v : g.a) v *= dt;
  if (full_exponential) return matrix_exponential(g);
  const Matrix g2 = g * g;
  Matrix e = Matrix::identity(grad_v.dim);
  for (std::size_t i = 0; i < e.a.size(); ++i) e.a[i] += g.a[i] + 0.5 * g2.a[i];
  return e;
}

TensorField advect_deformation(const TensorField& f, const DeparturePoints& dp,
                               const TransportOptions& opts) {
  require_same_grid(f, dp.feet, "advect_deformation");
  require_finite(f, "advect_deformation");
  const Grid& g = f.grid();
  const int d = g.dim();
  TensorField out(g);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    Matrix at_foot(d);
    for (std::size_t n = b; n < e; ++n) {
      const CubicStencil st(g, dp.foot(n));
      for (int c = 0; c < f.components(); ++c) at_foot.a[static_cast<std::size_t>(c)] = st.apply(f.comp(c));
      const Matrix prop = deformation_propagator(tensor_at(dp.gradv_mid, n), dp.dt, opts.full_exponential);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int k = 0; k < d; ++k) s += prop(i, k) * at_foot(k, j);
          out.comp(i, j)[n] = s;
        }
    }
  });
  require_finite(out, "advect_deformation");
  return out;
}

}  // namespace viscoflow
