#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "viscoflow/field.hpp"

namespace viscoflow {

using Point = std::array<double, 3>;

/// Tensor-product periodic Catmull-Rom stencil for one sample point.
///
/// Reproduces stored values bit-exactly at grid nodes and is exact on
/// data that is linear along each axis.
class CubicStencil {
 public:
  CubicStencil(const Grid& grid, const Point& x);

  /// Interpolated value of one component array.
  double apply(std::span<const double> data) const noexcept;

  /// Interpolated value clipped to the range of the 2^d nodes of the cell
  /// that contains the point. Never leaves [min, max] of the cell corners.
  double apply_monotone(std::span<const double> data) const noexcept;

 private:
  int dim_;
  // idx_[a][k]: wrapped coordinate of the k-th support node along axis a
  std::array<std::array<std::size_t, 4>, 3> idx_{};
  std::array<std::array<double, 4>, 3> w_{};
  std::array<std::size_t, 3> stride_{};
};

/// Catmull-Rom weights for fractional offset t in [0, 1); nodes -1, 0, 1, 2.
std::array<double, 4> catmull_rom_weights(double t) noexcept;

/// Samples every component of f at each point (wrapped into the box).
/// Result is indexed [point][component].
template <int Rank>
std::vector<std::vector<double>> sample_at(const Field<Rank>& f, std::span<const Point> points);

}  // namespace viscoflow
