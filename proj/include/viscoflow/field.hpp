#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "viscoflow/errors.hpp"
#include "viscoflow/grid.hpp"

namespace viscoflow {

/// Grid samples of a rank-0/1/2 quantity, one contiguous array per component
/// (structure of arrays). Tensor component (i, j) is stored at i * dim + j,
/// with i the row, so T(i, j) holds d u_i / d x_j for a velocity gradient.
template <int Rank>
class Field {
  static_assert(Rank >= 0 && Rank <= 2);

 public:
  static constexpr int kRank = Rank;

  Field() = default;

  explicit Field(const Grid& grid, double fill = 0.0)
      : grid_(grid),
        comps_(static_cast<std::size_t>(components_for(grid.dim())),
               std::vector<double>(grid.size(), fill)) {}

  static int components_for(int dim) noexcept {
    if constexpr (Rank == 0) return 1;
    else if constexpr (Rank == 1) return dim;
    else return dim * dim;
  }

  const Grid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  int components() const noexcept { return static_cast<int>(comps_.size()); }
  std::size_t size() const noexcept { return grid_.size(); }

  std::span<double> comp(int c) noexcept { return comps_[static_cast<std::size_t>(c)]; }
  std::span<const double> comp(int c) const noexcept {
    return comps_[static_cast<std::size_t>(c)];
  }
  std::span<double> comp(int i, int j) noexcept
    requires(Rank == 2)
  {
    return comp(i * dim() + j);
  }
  std::span<const double> comp(int i, int j) const noexcept
    requires(Rank == 2)
  {
    return comp(i * dim() + j);
  }

  /// Scalar access for rank-0 fields.
  double& operator[](std::size_t idx) noexcept
    requires(Rank == 0)
  {
    return comps_[0][idx];
  }
  double operator[](std::size_t idx) const noexcept
    requires(Rank == 0)
  {
    return comps_[0][idx];
  }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);
  /// this += s * o
  Field& axpy(double s, const Field& o);

  bool all_finite() const noexcept;

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.grid_ == b.grid_ && a.comps_ == b.comps_;
  }

 private:
  Grid grid_;
  std::vector<std::vector<double>> comps_;
};

using ScalarField = Field<0>;
using VectorField = Field<1>;
using TensorField = Field<2>;

template <int Rank>
Field<Rank>& Field<Rank>::operator+=(const Field& o) {
  return axpy(1.0, o);
}

template <int Rank>
Field<Rank>& Field<Rank>::operator-=(const Field& o) {
  return axpy(-1.0, o);
}

template <int Rank>
Field<Rank>& Field<Rank>::operator*=(double s) {
  for (auto& c : comps_)
    for (auto& x : c) x *= s;
  return *this;
}

template <int Rank>
Field<Rank>& Field<Rank>::axpy(double s, const Field& o) {
  if (!(o.grid_ == grid_)) throw PreconditionError("field grids differ");
  for (std::size_t c = 0; c < comps_.size(); ++c) {
    auto& dst = comps_[c];
    const auto& src = o.comps_[c];
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
  }
  return *this;
}

template <int Rank>
bool Field<Rank>::all_finite() const noexcept {
  for (const auto& c : comps_)
    for (double x : c)
      if (!std::isfinite(x)) return false;
  return true;
}

/// Throws NonFiniteError naming the first offending cell.
template <int Rank>
void require_finite(const Field<Rank>& f, const std::string& what) {
  for (int c = 0; c < f.components(); ++c) {
    const auto data = f.comp(c);
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!std::isfinite(data[i])) {
        const auto m = f.grid().multi_index(i);
        throw NonFiniteError(what + ": non-finite value in component " + std::to_string(c) +
                             " at cell (" + std::to_string(m[0]) + "," + std::to_string(m[1]) +
                             "," + std::to_string(m[2]) + ")");
      }
    }
  }
}

template <int RankA, int RankB>
void require_same_grid(const Field<RankA>& a, const Field<RankB>& b, const char* what) {
  if (!(a.grid() == b.grid())) throw PreconditionError(std::string(what) + ": fields live on different grids");
}

/// Pointwise Euclidean (Frobenius for tensors) magnitude.
template <int Rank>
ScalarField magnitude(const Field<Rank>& f) {
  ScalarField out(f.grid());
  auto o = out.comp(0);
  for (int c = 0; c < f.components(); ++c) {
    const auto d = f.comp(c);
    for (std::size_t i = 0; i < d.size(); ++i) o[i] += d[i] * d[i];
  }
  for (auto& x : o) x = std::sqrt(x);
  return out;
}

/// Samples a closed-form function at every node. fn(x, comp) -> value.
template <int Rank, typename Fn>
Field<Rank> make_field(const Grid& grid, Fn&& fn) {
  Field<Rank> f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.node_position(i);
    for (int c = 0; c < f.components(); ++c) f.comp(c)[i] = fn(x, c);
  }
  return f;
}

TensorField identity_tensor(const Grid& grid);

}  // namespace viscoflow
