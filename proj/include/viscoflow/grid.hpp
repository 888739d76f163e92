#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace viscoflow {

/// Uniform periodic box [0, L_0) x ... x [0, L_{d-1}).
///
/// A 2D grid is stored as a 3D grid with a single plane along axis 2, so all
/// index arithmetic is shared. Linear indices are row-major with axis 0
/// slowest: idx = (i0 * n1 + i1) * n2 + i2.
class Grid {
 public:
  static constexpr double kDefaultLength = 2.0 * std::numbers::pi;

  Grid() = default;

  /// Same resolution and extent on every active axis.
  Grid(int dim, int n, double length = kDefaultLength);
  Grid(int dim, std::array<int, 3> n, std::array<double, 3> length);

  int dim() const noexcept { return dim_; }
  int n(int axis) const noexcept { return n_[axis]; }
  const std::array<int, 3>& shape() const noexcept { return n_; }
  double length(int axis) const noexcept { return length_[axis]; }
  double h(int axis) const noexcept { return h_[axis]; }
  std::size_t size() const noexcept { return size_; }

  /// Volume of one cell, i.e. the midpoint-rule quadrature weight.
  double cell_volume() const noexcept;
  double volume() const noexcept { return cell_volume() * static_cast<double>(size_); }

  static int wrap(int i, int n) noexcept {
    const int r = i % n;
    return r < 0 ? r + n : r;
  }

  std::size_t index(int i0, int i1, int i2 = 0) const noexcept {
    return (static_cast<std::size_t>(wrap(i0, n_[0])) * static_cast<std::size_t>(n_[1]) +
            static_cast<std::size_t>(wrap(i1, n_[1]))) *
               static_cast<std::size_t>(n_[2]) +
           static_cast<std::size_t>(wrap(i2, n_[2]));
  }

  /// Inverse of index().
  std::array<int, 3> multi_index(std::size_t idx) const noexcept;

  /// Physical coordinate of node i along an axis: i * h.
  double coordinate(int axis, int i) const noexcept { return static_cast<double>(i) * h_[axis]; }
  std::array<double, 3> node_position(std::size_t idx) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int dim_ = 0;
  std::array<int, 3> n_{1, 1, 1};
  std::array<double, 3> length_{1.0, 1.0, 1.0};
  std::array<double, 3> h_{1.0, 1.0, 1.0};
  std::size_t size_ = 0;
};

bool is_power_of_two(int n) noexcept;

}  // namespace viscoflow
