#include "viscoflow/operators.hpp"

#include <array>
#include <cstdint>
#include <vector>

#include "viscoflow/parallel.hpp"

namespace viscoflow {
namespace {

// Linear-index offsets of the four off-center stencil neighbours (-2,-1,+1,+2)
// for every coordinate value along one axis, wrapping periodically.
struct AxisOffsets {
  std::array<std::vector<std::ptrdiff_t>, 4> off;
};

AxisOffsets make_offsets(const Grid& g, int axis) {
  const int n = g.n(axis);
  std::ptrdiff_t stride = 1;
  for (int a = 2; a > axis; --a) stride *= g.n(a);
  AxisOffsets ao;
  constexpr std::array<int, 4> shifts{-2, -1, 1, 2};
  for (int k = 0; k < 4; ++k) {
    ao.off[k].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      ao.off[k][static_cast<std::size_t>(i)] =
          static_cast<std::ptrdiff_t>(Grid::wrap(i + shifts[k], n) - i) * stride;
    }
  }
  return ao;
}

// Applies kernel(center_idx, m2, m1, p1, p2) at every node, with the
// neighbour indices along `axis`.
template <typename Kernel>
void sweep_axis(const Grid& g, int axis, Kernel&& kernel) {
  const AxisOffsets ao = make_offsets(g, axis);
  const int n0 = g.n(0), n1 = g.n(1), n2 = g.n(2);
#pragma omp parallel for schedule(static)
  for (int i0 = 0; i0 < n0; ++i0) {
    for (int i1 = 0; i1 < n1; ++i1) {
      for (int i2 = 0; i2 < n2; ++i2) {
        const std::size_t idx =
            (static_cast<std::size_t>(i0) * static_cast<std::size_t>(n1) +
             static_cast<std::size_t>(i1)) *
                static_cast<std::size_t>(n2) +
            static_cast<std::size_t>(i2);
        const int ia = axis == 0 ? i0 : (axis == 1 ? i1 : i2);
        const auto u = static_cast<std::size_t>(ia);
        const auto base = static_cast<std::ptrdiff_t>(idx);
        kernel(idx, static_cast<std::size_t>(base + ao.off[0][u]),
               static_cast<std::size_t>(base + ao.off[1][u]),
               static_cast<std::size_t>(base + ao.off[2][u]),
               static_cast<std::size_t>(base + ao.off[3][u]));
      }
    }
  }
}

}  // namespace

void accumulate_first_derivative(const Grid& grid, int axis, std::span<const double> in,
                                 std::span<double> out, double coef) {
  const double c = coef / (12.0 * grid.h(axis));
  sweep_axis(grid, axis, [&](std::size_t i, std::size_t m2, std::size_t m1, std::size_t p1,
                             std::size_t p2) {
    out[i] += c * (8.0 * (in[p1] - in[m1]) - (in[p2] - in[m2]));
  });
}

void accumulate_second_derivative(const Grid& grid, int axis, std::span<const double> in,
                                  std::span<double> out, double coef) {
  const double c = coef / (12.0 * grid.h(axis) * grid.h(axis));
  sweep_axis(grid, axis, [&](std::size_t i, std::size_t m2, std::size_t m1, std::size_t p1,
                             std::size_t p2) {
    const double f = in[i];
    out[i] += c * (16.0 * ((in[p1] - f) + (in[m1] - f)) - ((in[p2] - f) + (in[m2] - f)));
  });
}

VectorField apply_gradient(const ScalarField& f) {
  require_finite(f, "apply_gradient");
  VectorField out(f.grid());
  for (int a = 0; a < f.dim(); ++a) accumulate_first_derivative(f.grid(), a, f.comp(0), out.comp(a));
  return out;
}

TensorField apply_gradient(const VectorField& v) {
  require_finite(v, "apply_gradient");
  TensorField out(v.grid());
  const int d = v.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) accumulate_first_derivative(v.grid(), j, v.comp(i), out.comp(i, j));
  return out;
}

ScalarField apply_divergence(const VectorField& v) {
  require_finite(v, "apply_divergence");
  ScalarField out(v.grid());
  for (int a = 0; a < v.dim(); ++a) accumulate_first_derivative(v.grid(), a, v.comp(a), out.comp(0));
  return out;
}

VectorField apply_tensor_divergence(const TensorField& t) {
  require_finite(t, "apply_tensor_divergence");
  VectorField out(t.grid());
  const int d = t.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) accumulate_first_derivative(t.grid(), j, t.comp(i, j), out.comp(i));
  return out;
}

ScalarField apply_laplacian(const ScalarField& f) {
  require_finite(f, "apply_laplacian");
  ScalarField out(f.grid());
  for (int a = 0; a < f.dim(); ++a) accumulate_second_derivative(f.grid(), a, f.comp(0), out.comp(0));
  return out;
}

VectorField apply_laplacian(const VectorField& v) {
  require_finite(v, "apply_laplacian");
  VectorField out(v.grid());
  for (int c = 0; c < v.dim(); ++c)
    for (int a = 0; a < v.dim(); ++a) accumulate_second_derivative(v.grid(), a, v.comp(c), out.comp(c));
  return out;
}

VectorField convective_derivative(const VectorField& v, const VectorField& w) {
  require_same_grid(v, w, "convective_derivative");
  const TensorField gw = apply_gradient(w);
  VectorField out(v.grid());
  const int d = v.dim();
  parallel_for(v.size(), [&](std::size_t b, std::size_t e) {
    for (int i = 0; i < d; ++i) {
      auto o = out.comp(i);
      for (int j = 0; j < d; ++j) {
        const auto vj = v.comp(j);
        const auto g = gw.comp(i, j);
        for (std::size_t n = b; n < e; ++n) o[n] += vj[n] * g[n];
      }
    }
  });
  return out;
}

TensorField identity_tensor(const Grid& grid) {
  TensorField t(grid);
  for (int i = 0; i < grid.dim(); ++i)
    for (auto& x : t.comp(i, i)) x = 1.0;
  return t;
}

}  // namespace viscoflow
