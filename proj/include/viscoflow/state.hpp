#pragma once

#include "viscoflow/constitutive.hpp"
#include "viscoflow/field.hpp"

namespace viscoflow {

/// Density, velocity and deformation gradient at one instant.
struct State {
  double t = 0.0;
  ScalarField rho;
  VectorField u;
  TensorField F;

  const Grid& grid() const noexcept { return rho.grid(); }

  /// Shared grid, rho > 0, all samples finite.
  void validate() const;

  friend bool operator==(const State&, const State&) = default;
};

/// Material parameters of the momentum balance.
struct Physics {
  double mu = 1.0;
  double lambda = 0.0;
  PressureLaw law{};

  /// mu > 0 and 3 mu + 2 lambda > 0, plus the pressure-law checks.
  void validate() const;
  bool operator==(const Physics&) const = default;
};

}  // namespace viscoflow
