#pragma once

#include "viscoflow/constitutive.hpp"
#include "viscoflow/field.hpp"
#include "viscoflow/interpolation.hpp"

namespace viscoflow {

/// Backward characteristic feet for one step of a frozen velocity, plus the
/// velocity derivatives sampled at each characteristic midpoint.
struct DeparturePoints {
  Grid grid;
  /// Unwrapped physical foot coordinates, one component per axis.
  VectorField feet;
  ScalarField divv_mid;
  TensorField gradv_mid;
  double dt = 0.0;

  Point foot(std::size_t idx) const noexcept {
    Point p{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) p[a] = feet.comp(a)[idx];
    return p;
  }
  /// max over nodes of |divv_mid|
  double max_abs_divergence() const;
};

/// Thrown when dt * ||v||_inf exceeds a quarter of the box; carries a usable dt.
class CflViolation : public SolverDivergence {
 public:
  CflViolation(double advisory_dt, const std::string& what)
      : SolverDivergence("cfl", what), advisory_dt_(advisory_dt) {}
  double advisory_dt() const noexcept { return advisory_dt_; }

 private:
  double advisory_dt_;
};

/// Midpoint (RK2) backward trace: x_mid = x - dt/2 v(x), foot = x - dt v(x_mid).
DeparturePoints trace_departure_points(const VectorField& v, double dt);

struct TransportOptions {
  /// Clip the density interpolant to the local cell range (maximum principle).
  bool monotone_density = true;
  /// Use the full matrix exponential for the F propagator instead of the
  /// second-order truncation.
  bool full_exponential = false;

  bool operator==(const TransportOptions&) const = default;
};

/// rho_new(x) = rho(foot) * exp(-dt * divv_mid(x)).
ScalarField advect_density(const ScalarField& rho, const DeparturePoints& dp,
                           const TransportOptions& opts = {});

/// F_new(x) = E(x) F(foot), E = I + dt G + (dt G)^2 / 2 with G = gradv_mid.
TensorField advect_deformation(const TensorField& f, const DeparturePoints& dp,
                               const TransportOptions& opts = {});

/// Propagator used by advect_deformation for one node.
Matrix deformation_propagator(const Matrix& grad_v, double dt, bool full_exponential);

/// Scaling-and-squaring Taylor exponential of a small dense matrix.
Matrix matrix_exponential(const Matrix& a);

}  // namespace viscoflow
