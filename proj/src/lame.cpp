#include "viscoflow/lame.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "viscoflow/norms.hpp"
#include "viscoflow/operators.hpp"
#include "viscoflow/parallel.hpp"

namespace viscoflow {

std::string to_string(Preconditioner p) {
  switch (p) {
    case Preconditioner::kNone: return "none";
    case Preconditioner::kJacobi: return "jacobi";
    case Preconditioner::kFftConstantCoefficient: return "fft_constant_coefficient";
  }
  return "unknown";
}

Preconditioner parse_preconditioner(const std::string& name) {
  if (name == "none") return Preconditioner::kNone;
  if (name == "jacobi") return Preconditioner::kJacobi;
  if (name == "fft" || name == "fft_constant_coefficient") return Preconditioner::kFftConstantCoefficient;
  throw PreconditionError("unknown preconditioner '" + name + "'");
}

void LameProblem::validate() const {
  if (!(mu > 0.0)) throw PreconditionError("Lame problem violates mu > 0");
  if (!(3.0 * mu + 2.0 * lambda > 0.0)) throw PreconditionError("Lame problem violates 3mu+2lambda > 0");
  if (!(dt > 0.0)) throw PreconditionError("Lame problem needs dt > 0");
  require_same_grid(rho, rhs, "LameProblem");
  require_same_grid(rho, u_prev, "LameProblem");
  require_finite(rho, "LameProblem rho");
  require_finite(rhs, "LameProblem rhs");
  require_finite(u_prev, "LameProblem u_prev");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) {
      const auto m = rho.grid().multi_index(i);
      throw PreconditionError("Lame problem needs rho > 0; rho = " + std::to_string(rho[i]) +
                              " at cell (" + std::to_string(m[0]) + "," + std::to_string(m[1]) +
                              "," + std::to_string(m[2]) + ")");
    }
  }
}

VectorField apply_lame_operator(const LameProblem& p, const VectorField& u) {
  require_same_grid(p.rho, u, "apply_lame_operator");
  const Grid& g = u.grid();
  const int d = g.dim();
  VectorField out = apply_laplacian(u);
  out *= -p.mu;
  const VectorField gd = apply_gradient(apply_divergence(u));
  out.axpy(-(p.mu + p.lambda), gd);
  const double inv_dt = 1.0 / p.dt;
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (int c = 0; c < d; ++c) {
      auto o = out.comp(c);
      const auto uc = u.comp(c);
      for (std::size_t n = b; n < e; ++n) o[n] += p.rho[n] * inv_dt * uc[n];
    }
  });
  return out;
}

VectorField lame_right_hand_side(const LameProblem& p) {
  VectorField b = p.rhs;
  const double inv_dt = 1.0 / p.dt;
  for (int c = 0; c < b.dim(); ++c) {
    auto o = b.comp(c);
    const auto up = p.u_prev.comp(c);
    for (std::size_t n = 0; n < b.size(); ++n) o[n] += p.rho[n] * inv_dt * up[n];
  }
  return b;
}

// ---------------------------------------------------------------------------

struct FftLamePreconditioner::Impl {
  Grid grid;
  int dim;
  std::size_t real_size;
  std::size_t complex_size;
  double* real_buf = nullptr;
  std::array<fftw_complex*, 3> spec{nullptr, nullptr, nullptr};
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  // Per-wavenumber data: a = rho_bar/dt + mu*sigma, and the first-derivative symbol s.
  std::vector<double> diag;
  std::array<std::vector<double>, 3> sym;
  double coupling;  // mu + lambda

  ~Impl() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (real_buf) fftw_free(real_buf);
    for (auto* s : spec)
      if (s) fftw_free(s);
  }
};

FftLamePreconditioner::FftLamePreconditioner(const Grid& grid, double mean_rho, double mu,
                                             double lambda, double dt)
    : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.grid = grid;
  m.dim = grid.dim();
  m.coupling = mu + lambda;
  const int d = m.dim;
  std::array<int, 3> dims{grid.n(0), grid.n(1), grid.n(2)};
  std::array<int, 3> cdims = dims;
  cdims[d - 1] = dims[d - 1] / 2 + 1;
  m.real_size = grid.size();
  m.complex_size = 1;
  for (int a = 0; a < d; ++a) m.complex_size *= static_cast<std::size_t>(cdims[a]);

  m.real_buf = fftw_alloc_real(m.real_size);
  for (int a = 0; a < d; ++a) m.spec[a] = fftw_alloc_complex(m.complex_size);
  // FFTW_ESTIMATE keeps plan selection, and hence rounding, identical run to run.
  m.forward = fftw_plan_dft_r2c(d, dims.data(), m.real_buf, m.spec[0], FFTW_ESTIMATE);
  m.backward = fftw_plan_dft_c2r(d, dims.data(), m.spec[0], m.real_buf, FFTW_ESTIMATE);
  if (!m.forward || !m.backward) throw PreconditionError("FFTW plan creation failed");

  m.diag.resize(m.complex_size);
  for (int a = 0; a < d; ++a) m.sym[a].resize(m.complex_size);
  for (std::size_t k = 0; k < m.complex_size; ++k) {
    // unravel k over cdims (row-major)
    std::array<int, 3> kk{0, 0, 0};
    std::size_t rem = k;
    for (int a = d - 1; a >= 0; --a) {
      kk[a] = static_cast<int>(rem % static_cast<std::size_t>(cdims[a]));
      rem /= static_cast<std::size_t>(cdims[a]);
    }
    double sigma = 0.0;
    for (int a = 0; a < d; ++a) {
      const double h = grid.h(a);
      const double th = 2.0 * std::numbers::pi * kk[a] / dims[a];
      sigma += (30.0 - 32.0 * std::cos(th) + 2.0 * std::cos(2.0 * th)) / (12.0 * h * h);
      m.sym[a][k] = (8.0 * std::sin(th) - std::sin(2.0 * th)) / (6.0 * h);
    }
    m.diag[k] = mean_rho / dt + mu * sigma;
  }
}

FftLamePreconditioner::~FftLamePreconditioner() = default;

VectorField FftLamePreconditioner::apply(const VectorField& r) const {
  const Impl& m = *impl_;
  const int d = m.dim;
  for (int a = 0; a < d; ++a) {
    std::copy(r.comp(a).begin(), r.comp(a).end(), m.real_buf);
    fftw_execute_dft_r2c(m.forward, m.real_buf, m.spec[a]);
  }
  // (a I + c s s^T)^{-1} = (I - c s s^T / (a + c |s|^2)) / a
  for (std::size_t k = 0; k < m.complex_size; ++k) {
    const double a = m.diag[k];
    double s2 = 0.0;
    std::complex<double> sdot{0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      const double s = m.sym[i][k];
      s2 += s * s;
      sdot += s * std::complex<double>(m.spec[i][k][0], m.spec[i][k][1]);
    }
    const std::complex<double> corr = m.coupling * sdot / (a + m.coupling * s2);
    for (int i = 0; i < d; ++i) {
      const std::complex<double> x(m.spec[i][k][0], m.spec[i][k][1]);
      const std::complex<double> y = (x - m.sym[i][k] * corr) / a;
      m.spec[i][k][0] = y.real();
      m.spec[i][k][1] = y.imag();
    }
  }
  VectorField out(r.grid());
  const double scale = 1.0 / static_cast<double>(m.real_size);
  for (int a = 0; a < d; ++a) {
    fftw_execute_dft_c2r(m.backward, m.spec[a], m.real_buf);
    auto o = out.comp(a);
    for (std::size_t n = 0; n < m.real_size; ++n) o[n] = m.real_buf[n] * scale;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

VectorField jacobi_apply(const LameProblem& p, const VectorField& r) {
  const Grid& g = r.grid();
  const int d = g.dim();
  double lap_diag = 0.0;
  for (int a = 0; a < d; ++a) lap_diag += 30.0 / (12.0 * g.h(a) * g.h(a));
  VectorField z(g);
  for (int c = 0; c < d; ++c) {
    const double gd_diag = 130.0 / (144.0 * g.h(c) * g.h(c));
    auto o = z.comp(c);
    const auto rc = r.comp(c);
    for (std::size_t n = 0; n < g.size(); ++n) {
      const double diag = p.rho[n] / p.dt + p.mu * lap_diag + (p.mu + p.lambda) * gd_diag;
      o[n] = rc[n] / diag;
    }
  }
  return z;
}

}  // namespace

LameSolution solve_momentum(const LameProblem& p, double tol, int max_iter, Preconditioner pc) {
  if (!(tol > 0.0 && tol < 1.0)) throw PreconditionError("solve_momentum: tol must lie in (0, 1)");
  if (max_iter < 1) throw PreconditionError("solve_momentum: max_iter must be >= 1");
  p.validate();

  const Grid& g = p.rho.grid();
  const VectorField b = lame_right_hand_side(p);
  const double bnorm = std::sqrt(dot(b, b));
  SolveStats stats;
  stats.preconditioner = pc;
  if (bnorm == 0.0) return {VectorField(g), stats};

  std::unique_ptr<FftLamePreconditioner> fft;
  if (pc == Preconditioner::kFftConstantCoefficient) {
    const double mean_rho = integrate(p.rho) / g.volume();
    fft = std::make_unique<FftLamePreconditioner>(g, mean_rho, p.mu, p.lambda, p.dt);
  }
  auto precondition = [&](const VectorField& r) -> VectorField {
    switch (pc) {
      case Preconditioner::kNone: return r;
      case Preconditioner::kJacobi: return jacobi_apply(p, r);
      case Preconditioner::kFftConstantCoefficient: return fft->apply(r);
    }
    return r;
  };

  VectorField x = p.u_prev;
  VectorField r = b;
  r -= apply_lame_operator(p, x);
  double res = std::sqrt(dot(r, r)) / bnorm;
  stats.residual_history.push_back(res);
  VectorField best = x;
  double best_res = res;
  if (res <= tol) {
    stats.final_residual = res;
    return {std::move(x), std::move(stats)};
  }

  VectorField z = precondition(r);
  VectorField pdir = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    const VectorField ap = apply_lame_operator(p, pdir);
    const double pap = dot(pdir, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    x.axpy(alpha, pdir);
    r.axpy(-alpha, ap);
    res = std::sqrt(dot(r, r)) / bnorm;
    stats.iterations = it;
    stats.residual_history.push_back(res);
    if (res <= tol) {
      // confirm against the true residual before accepting
      VectorField rt = b;
      rt -= apply_lame_operator(p, x);
      const double true_res = std::sqrt(dot(rt, rt)) / bnorm;
      if (true_res < best_res) {
        best = x;
        best_res = true_res;
      }
      if (true_res <= tol) {
        stats.final_residual = true_res;
        return {std::move(x), std::move(stats)};
      }
      r = std::move(rt);
      z = precondition(r);
      pdir = z;
      rz = dot(r, z);
      continue;
    }
    if (res < best_res) {
      best = x;
      best_res = res;
    }
    z = precondition(r);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    pdir *= beta;
    pdir += z;
  }
  stats.final_residual = best_res;
  throw LameNonConvergence(std::move(best), stats,
                           "solve_momentum: no convergence to " + std::to_string(tol) + " in " +
                               std::to_string(max_iter) + " iterations (best residual " +
                               std::to_string(best_res) + ")");
}

}  // namespace viscoflow
