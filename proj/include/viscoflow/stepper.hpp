#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "viscoflow/lame.hpp"
#include "viscoflow/state.hpp"
#include "viscoflow/transport.hpp"

namespace viscoflow {

class MonitorSuite;

struct StepConfig {
  double dt = 1e-2;
  double dt_min = 1e-8;
  double picard_tol = 1e-8;
  int max_picard = 50;
  /// Relaxation theta in (0, 1]: v <- theta * H(v) + (1 - theta) * v.
  double relaxation = 1.0;
  double lame_tol = 1e-10;
  int lame_max_iter = 500;
  Preconditioner preconditioner = Preconditioner::kFftConstantCoefficient;
  /// Abort the Picard loop when the H1 norm of an iterate exceeds this; 0 disables.
  double ball_radius_guard = 0.0;
  /// Maximum consecutive dt halvings for one step in run_simulation.
  int max_halvings = 10;
  TransportOptions transport{};

  void validate() const;
  bool operator==(const StepConfig&) const = default;
};

/// Relative velocity change per Picard iteration.
struct PicardTrace {
  std::vector<double> changes;
  bool converged = false;
  int iterations = 0;

  /// Geometric mean of successive change ratios; 0 when fewer than two changes.
  double decay_ratio() const;
};

/// Manufactured forcing injected into the three equations at time t.
struct Sources {
  ScalarField rho;
  VectorField u;
  TensorField F;
};

class Forcing {
 public:
  virtual ~Forcing() = default;
  virtual Sources evaluate(const Grid& grid, double t) const = 0;
};

struct StepResult {
  State state;
  PicardTrace trace;
  /// Feet of the converged velocity; the final rho and F were built from them.
  DeparturePoints departure;
  int lame_iterations = 0;
  double lame_residual = 0.0;
};

class PicardDivergence : public SolverDivergence {
 public:
  PicardDivergence(PicardTrace trace, const std::string& what)
      : SolverDivergence("picard_divergence", what), trace_(std::move(trace)) {}
  const PicardTrace& trace() const noexcept { return trace_; }

 private:
  PicardTrace trace_;
};

class NormBlowup : public SolverDivergence {
 public:
  explicit NormBlowup(const std::string& what) : SolverDivergence("norm_blowup", what) {}
};

/// -rho (v.grad) v - grad P(rho) + div(rho F F^T)
VectorField assemble_momentum_rhs(const ScalarField& rho, const VectorField& v, const TensorField& F,
                                  const PressureLaw& law);

/// One time step: iterate v -> (S(v), T(v)) -> H(v) from v = u^n until the
/// relative velocity change drops below picard_tol.
StepResult picard_step(const State& s, const StepConfig& cfg, const Physics& phys,
                       const Forcing* forcing = nullptr);

struct RunSummary {
  State final_state;
  int steps = 0;
  int rejected_attempts = 0;
  int total_picard_iterations = 0;
  int total_lame_iterations = 0;
  double smallest_dt = 0.0;
  std::vector<PicardTrace> traces;
};

using StepObserver = std::function<void(const StepResult&, int step)>;

/// Advances to t_final. A Picard or CFL failure halves dt (at most
/// max_halvings times per step); dt recovers by doubling after each accepted
/// step. Falling below dt_min aborts with SolverDivergence.
RunSummary run_simulation(const State& initial, double t_final, const StepConfig& cfg,
                          const Physics& phys, MonitorSuite* monitors = nullptr,
                          const StepObserver& observer = {}, const Forcing* forcing = nullptr);

}  // namespace viscoflow
