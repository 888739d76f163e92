#pragma once

#include <span>

#include "viscoflow/field.hpp"

namespace viscoflow {

// Fourth-order central finite differences on the periodic grid.
//
//   d/dx   f_i ~ [8 (f_{i+1} - f_{i-1}) - (f_{i+2} - f_{i-2})] / (12 h)
//   d2/dx2 f_i ~ [16 (f_{i+1} + f_{i-1} - 2 f_i) - (f_{i+2} + f_{i-2} - 2 f_i)] / (12 h^2)
//
// Both stencils return exactly zero on constant data.

/// out += coef * d/dx_axis in
void accumulate_first_derivative(const Grid& grid, int axis, std::span<const double> in,
                                 std::span<double> out, double coef = 1.0);
/// out += coef * d2/dx_axis^2 in
void accumulate_second_derivative(const Grid& grid, int axis, std::span<const double> in,
                                  std::span<double> out, double coef = 1.0);

VectorField apply_gradient(const ScalarField& f);
/// (grad v)_ij = d v_i / d x_j
TensorField apply_gradient(const VectorField& v);

ScalarField apply_divergence(const VectorField& v);
/// Row-wise divergence: (div T)_i = d_j T_ij
VectorField apply_tensor_divergence(const TensorField& t);

ScalarField apply_laplacian(const ScalarField& f);
/// Componentwise Laplacian.
VectorField apply_laplacian(const VectorField& v);

/// Pointwise (v . grad) w, i.e. sum_j v_j d_j w_i.
VectorField convective_derivative(const VectorField& v, const VectorField& w);

}  // namespace viscoflow
