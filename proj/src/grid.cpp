#include "viscoflow/grid.hpp"

#include <string>

#include "viscoflow/errors.hpp"

namespace viscoflow {

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

Grid::Grid(int dim, int n, double length)
    : Grid(dim, {n, n, dim == 3 ? n : 1}, {length, length, dim == 3 ? length : 1.0}) {}

Grid::Grid(int dim, std::array<int, 3> n, std::array<double, 3> length)
    : dim_(dim), n_(n), length_(length) {
  if (dim != 2 && dim != 3) {
    throw PreconditionError("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (dim == 2) {
    n_[2] = 1;
    length_[2] = 1.0;
  }
  for (int a = 0; a < dim; ++a) {
    if (n_[a] < 8 || !is_power_of_two(n_[a])) {
      throw PreconditionError("grid axis " + std::to_string(a) +
                              " needs a power-of-two cell count >= 8, got " +
                              std::to_string(n_[a]));
    }
    if (!(length_[a] > 0.0)) {
      throw PreconditionError("grid axis " + std::to_string(a) + " needs a positive length");
    }
  }
  for (int a = 0; a < 3; ++a) h_[a] = length_[a] / static_cast<double>(n_[a]);
  size_ = static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]) *
          static_cast<std::size_t>(n_[2]);
}

double Grid::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= h_[a];
  return v;
}

std::array<int, 3> Grid::multi_index(std::size_t idx) const noexcept {
  const auto n1 = static_cast<std::size_t>(n_[1]);
  const auto n2 = static_cast<std::size_t>(n_[2]);
  const int i2 = static_cast<int>(idx % n2);
  idx /= n2;
  const int i1 = static_cast<int>(idx % n1);
  const int i0 = static_cast<int>(idx / n1);
  return {i0, i1, i2};
}

std::array<double, 3> Grid::node_position(std::size_t idx) const noexcept {
  const auto m = multi_index(idx);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(a, m[a]);
  return x;
}

}  // namespace viscoflow
