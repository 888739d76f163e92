#pragma once

#include <string>

#include "viscoflow/field.hpp"

namespace viscoflow {

enum class NormKind { kL1, kL2, kLq, kLinf, kW1q };

NormKind parse_norm_kind(const std::string& name);

/// Midpoint-rule discrete norm over the periodic box. Pointwise magnitudes
/// are Euclidean (Frobenius for tensors). W1q is ||f||_Lq + ||grad f||_Lq.
/// q must lie in (3, 6] for Lq and W1q.
template <int Rank>
double discrete_norm(const Field<Rank>& f, NormKind kind, double q = 4.0);

/// Midpoint-rule integral of a scalar field.
double integrate(const ScalarField& f);

/// Discrete L2 inner product sum_c sum_i a_c[i] b_c[i] (no volume weight),
/// with the fixed reduction order of deterministic_sum.
template <int Rank>
double dot(const Field<Rank>& a, const Field<Rank>& b);

}  // namespace viscoflow
