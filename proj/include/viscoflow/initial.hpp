#pragma once

#include <cstdint>

#include "viscoflow/config.hpp"
#include "viscoflow/state.hpp"

namespace viscoflow {

/// rho = 1, u = 0, F = I.
State equilibrium_state(const Grid& grid);

/// rho = 1 + amplitude sin(k x0), u = 0, F = I.
State acoustic_state(const Grid& grid, double amplitude, int k);

/// Deformation of a smooth periodic map X(x) = x - psi(x): F = (grad X)^{-1},
/// rho = det grad X, so rho F^T is the cofactor of grad X and div(rho F^T) = 0.
/// Throws PreconditionError if det grad X <= 0 somewhere.
State compatible_deformation_state(const Grid& grid, double amplitude, int k);

/// F = (1 + amplitude sin(k x0)) I, which violates the curl identity.
State incompatible_state(const Grid& grid, double amplitude, int k);

/// Low-mode random perturbation of equilibrium, reproducible from the seed.
State random_smooth_state(const Grid& grid, double amplitude, std::uint64_t seed);

/// Adds velocity * (sin x0 cos x1, -cos x0 sin x1, 0), a divergence-free cell flow.
void add_cell_flow(State& s, double velocity, int k);

/// Builds the configured initial state (including the "file" preset).
State initial_state(const RunConfig& c);

}  // namespace viscoflow
