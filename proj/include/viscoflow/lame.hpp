#pragma once

#include <memory>
#include <string>
#include <vector>

#include "viscoflow/field.hpp"

namespace viscoflow {

enum class Preconditioner { kNone, kJacobi, kFftConstantCoefficient };

std::string to_string(Preconditioner p);
Preconditioner parse_preconditioner(const std::string& name);

/// One implicit-Euler momentum solve:
///   (rho/dt) u - mu Lap u - (mu + lambda) grad div u = rhs + (rho/dt) u_prev
struct LameProblem {
  ScalarField rho;
  double mu = 1.0;
  double lambda = 0.0;
  double dt = 1.0;
  VectorField rhs;
  VectorField u_prev;

  /// mu > 0, 3 mu + 2 lambda > 0, dt > 0, rho > 0 and finite, shared grid.
  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  /// ||A u - b||_2 / ||b||_2, recomputed from the returned iterate.
  double final_residual = 0.0;
  Preconditioner preconditioner = Preconditioner::kFftConstantCoefficient;
  std::vector<double> residual_history;
};

struct LameSolution {
  VectorField u;
  SolveStats stats;
};

class LameNonConvergence : public SolverDivergence {
 public:
  LameNonConvergence(VectorField best, SolveStats stats, const std::string& what)
      : SolverDivergence("lame_nonconvergence", what), best_(std::move(best)), stats_(std::move(stats)) {}
  const VectorField& best_iterate() const noexcept { return best_; }
  const SolveStats& stats() const noexcept { return stats_; }

 private:
  VectorField best_;
  SolveStats stats_;
};

/// (rho/dt) u - mu Lap u - (mu + lambda) grad div u with the 4th-order stencils.
VectorField apply_lame_operator(const LameProblem& p, const VectorField& u);

/// Right-hand side rhs + (rho/dt) u_prev of the momentum solve.
VectorField lame_right_hand_side(const LameProblem& p);

/// Exact inverse of the constant-coefficient operator
///   (rho_bar/dt) - mu Lap - (mu + lambda) grad div
/// with the same discrete stencils, applied per wavenumber in Fourier space.
class FftLamePreconditioner {
 public:
  FftLamePreconditioner(const Grid& grid, double mean_rho, double mu, double lambda, double dt);
  ~FftLamePreconditioner();
  FftLamePreconditioner(const FftLamePreconditioner&) = delete;
  FftLamePreconditioner& operator=(const FftLamePreconditioner&) = delete;

  VectorField apply(const VectorField& r) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Preconditioned conjugate gradients on the SPD Lamé operator, started from
/// u_prev. Throws LameNonConvergence after max_iter iterations.
LameSolution solve_momentum(const LameProblem& p, double tol, int max_iter,
                            Preconditioner pc = Preconditioner::kFftConstantCoefficient);

}  // namespace viscoflow
