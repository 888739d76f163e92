#include "viscoflow/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "viscoflow/monitors.hpp"
#include "viscoflow/norms.hpp"
#include "viscoflow/operators.hpp"
#include "viscoflow/parallel.hpp"

namespace viscoflow {

void State::validate() const {
  require_same_grid(rho, u, "State");
  require_same_grid(rho, F, "State");
  require_finite(rho, "State rho");
  require_finite(u, "State u");
  require_finite(F, "State F");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) {
      const auto m = rho.grid().multi_index(i);
      throw PreconditionError("State: nonpositive density at cell (" + std::to_string(m[0]) + "," +
                              std::to_string(m[1]) + "," + std::to_string(m[2]) + ")");
    }
  }
}

void Physics::validate() const {
  if (!(mu > 0.0)) throw PreconditionError("physics violates mu > 0");
  if (!(3.0 * mu + 2.0 * lambda > 0.0)) throw PreconditionError("physics violates 3mu+2lambda > 0");
  law.validate();
}

void StepConfig::validate() const {
  if (!(dt > 0.0)) throw PreconditionError("step config needs dt > 0");
  if (!(dt_min > 0.0 && dt_min <= dt)) throw PreconditionError("step config needs 0 < dt_min <= dt");
  if (!(picard_tol > 0.0)) throw PreconditionError("step config needs picard_tol > 0");
  if (max_picard < 1) throw PreconditionError("step config needs max_picard >= 1");
  if (!(relaxation > 0.0 && relaxation <= 1.0)) throw PreconditionError("step config needs relaxation in (0, 1]");
  if (!(lame_tol > 0.0 && lame_tol < 1.0)) throw PreconditionError("step config needs lame_tol in (0, 1)");
  if (lame_max_iter < 1) throw PreconditionError("step config needs lame_max_iter >= 1");
  if (ball_radius_guard < 0.0) throw PreconditionError("step config needs ball_radius_guard >= 0");
}

double PicardTrace::decay_ratio() const {
  // ratios of consecutive nonzero changes
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t k = 1; k < changes.size(); ++k) {
    if (changes[k - 1] > 0.0 && changes[k] > 0.0) {
      log_sum += std::log(changes[k] / changes[k - 1]);
      ++count;
    }
  }
  return count == 0 ? 0.0 : std::exp(log_sum / count);
}

VectorField assemble_momentum_rhs(const ScalarField& rho, const VectorField& v, const TensorField& F,
                                  const PressureLaw& law) {
  require_same_grid(rho, v, "assemble_momentum_rhs");
  require_same_grid(rho, F, "assemble_momentum_rhs");
  VectorField rhs = apply_gradient(pressure(rho, law));
  rhs *= -1.0;
  rhs += cauchy_elastic_source(rho, F);
  const VectorField conv = convective_derivative(v, v);
  const int d = rho.dim();
  parallel_for(rho.size(), [&](std::size_t b, std::size_t e) {
    for (int i = 0; i < d; ++i) {
      auto o = rhs.comp(i);
      const auto c = conv.comp(i);
      for (std::size_t n = b; n < e; ++n) o[n] -= rho[n] * c[n];
    }
  });
  return rhs;
}

namespace {

double h1_norm(const VectorField& v) {
  const double a = discrete_norm(v, NormKind::kL2);
  const double b = discrete_norm(apply_gradient(v), NormKind::kL2);
  return std::sqrt(a * a + b * b);
}

struct Slaved {
  DeparturePoints dp;
  ScalarField rho;
  TensorField F;
};

Slaved slave_to_velocity(const State& s, const VectorField& v, double dt, const StepConfig& cfg,
                         const Sources* src) {
  Slaved out{trace_departure_points(v, dt), {}, {}};
  out.rho = advect_density(s.rho, out.dp, cfg.transport);
  out.F = advect_deformation(s.F, out.dp, cfg.transport);
  if (src) {
    out.rho.axpy(dt, src->rho);
    out.F.axpy(dt, src->F);
  }
  return out;
}

}  // namespace

StepResult picard_step(const State& s, const StepConfig& cfg, const Physics& phys, const Forcing* forcing) {
  cfg.validate();
  phys.validate();
  s.validate();
  const double dt = cfg.dt;
  const Grid& g = s.grid();

  std::optional<Sources> src;
  if (forcing) src = forcing->evaluate(g, s.t + dt);
  const Sources* srcp = src ? &*src : nullptr;

  PicardTrace trace;
  VectorField v = s.u;
  int lame_iters = 0;
  double lame_res = 0.0;
  constexpr double kFloor = 1e-14;

  for (int k = 0; k < cfg.max_picard; ++k) {
    const Slaved sl = slave_to_velocity(s, v, dt, cfg, srcp);
    LameProblem prob{sl.rho, phys.mu, phys.lambda, dt,
                     assemble_momentum_rhs(sl.rho, v, sl.F, phys.law), s.u};
    if (srcp) prob.rhs += srcp->u;
    LameSolution sol = solve_momentum(prob, cfg.lame_tol, cfg.lame_max_iter, cfg.preconditioner);
    lame_iters += sol.stats.iterations;
    lame_res = std::max(lame_res, sol.stats.final_residual);

    VectorField next = std::move(sol.u);
    if (cfg.relaxation != 1.0) {
      next *= cfg.relaxation;
      next.axpy(1.0 - cfg.relaxation, v);
    }
    VectorField diff = next;
    diff -= v;
    const double change = std::sqrt(dot(diff, diff)) / std::max(std::sqrt(dot(v, v)), kFloor);
    trace.changes.push_back(change);
    trace.iterations = k + 1;
    v = std::move(next);

    if (cfg.ball_radius_guard > 0.0) {
      const double r = h1_norm(v);
      if (r > cfg.ball_radius_guard) {
        throw NormBlowup("picard_step: iterate H1 norm " + std::to_string(r) +
                         " exceeds guard radius " + std::to_string(cfg.ball_radius_guard));
      }
    }
    if (!std::isfinite(change)) break;
    if (change <= cfg.picard_tol) {
      trace.converged = true;
      break;
    }
  }
  if (!trace.converged) {
    const double last = trace.changes.empty() ? 0.0 : trace.changes.back();
    throw PicardDivergence(trace, "picard_step: no fixed point within " + std::to_string(cfg.max_picard) +
                                      " iterations at dt=" + std::to_string(dt) +
                                      " (last change " + std::to_string(last) + ")");
  }

  Slaved fin = slave_to_velocity(s, v, dt, cfg, srcp);
  State next{s.t + dt, std::move(fin.rho), std::move(v), std::move(fin.F)};
  next.validate();
  return {std::move(next), std::move(trace), std::move(fin.dp), lame_iters, lame_res};
}

RunSummary run_simulation(const State& initial, double t_final, const StepConfig& cfg, const Physics& phys,
                          MonitorSuite* monitors, const StepObserver& observer, const Forcing* forcing) {
  cfg.validate();
  if (!(t_final > initial.t)) throw PreconditionError("run_simulation: t_final must exceed the initial time");

  RunSummary summary{initial, 0, 0, 0, 0, cfg.dt, {}};
  State& cur = summary.final_state;
  double dt = cfg.dt;
  // Relative slack so that accumulated round-off never produces a sliver step.
  const double t_eps = 1e-12 * std::max(1.0, std::abs(t_final));

  while (cur.t < t_final - t_eps) {
    int halvings = 0;
    for (;;) {
      StepConfig attempt = cfg;
      attempt.dt = std::min(dt, t_final - cur.t);
      attempt.dt_min = std::min(cfg.dt_min, attempt.dt);
      try {
        StepResult res = picard_step(cur, attempt, phys, forcing);
        ++summary.steps;
        summary.total_picard_iterations += res.trace.iterations;
        summary.total_lame_iterations += res.lame_iterations;
        summary.smallest_dt = std::min(summary.smallest_dt, attempt.dt);
        if (monitors) monitors->record_step(res.state, &res.departure, attempt.dt, res.trace.iterations,
                                            res.lame_iterations, res.lame_residual);
        if (observer) observer(res, summary.steps);
        summary.traces.push_back(res.trace);
        if (std::abs(res.state.t - t_final) <= t_eps) res.state.t = t_final;
        cur = std::move(res.state);
        dt = std::min(cfg.dt, 2.0 * dt);
        break;
      } catch (const PicardDivergence&) {
        ++summary.rejected_attempts;
      } catch (const CflViolation&) {
        ++summary.rejected_attempts;
      } catch (const LameNonConvergence&) {
        ++summary.rejected_attempts;
      }
      ++halvings;
      dt *= 0.5;
      if (halvings > cfg.max_halvings || dt < cfg.dt_min) {
        throw SolverDivergence("dt_underflow", "run_simulation: dt fell to " + std::to_string(dt) +
                                                   " at t=" + std::to_string(cur.t) + " after " +
                                                   std::to_string(halvings) + " halvings");
      }
    }
  }
  return summary;
}

}  // namespace viscoflow
