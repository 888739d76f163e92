#include "viscoflow/interpolation.hpp"

#include <algorithm>
#include <cmath>

namespace viscoflow {

std::array<double, 4> catmull_rom_weights(double t) noexcept {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
          0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

CubicStencil::CubicStencil(const Grid& grid, const Point& x) : dim_(grid.dim()) {
  stride_ = {static_cast<std::size_t>(grid.n(1)) * static_cast<std::size_t>(grid.n(2)),
             static_cast<std::size_t>(grid.n(2)), 1};
  for (int a = 0; a < 3; ++a) {
    if (a >= dim_) {
      idx_[a] = {0, 0, 0, 0};
      w_[a] = {0.0, 1.0, 0.0, 0.0};
      continue;
    }
    const int n = grid.n(a);
    double s = x[a] / grid.h(a);
    // Points produced as i*h must land on node i exactly.
    const double r = std::nearbyint(s);
    if (std::abs(s - r) <= 1e-10 * (1.0 + std::abs(r))) s = r;
    const double fl = std::floor(s);
    const double t = s - fl;
    const long base = static_cast<long>(fl);
    const long nn = n;
    for (int k = 0; k < 4; ++k) {
      long i = (base - 1 + k) % nn;
      if (i < 0) i += nn;
      idx_[a][k] = static_cast<std::size_t>(i);
    }
    w_[a] = catmull_rom_weights(t);
  }
}

double CubicStencil::apply(std::span<const double> data) const noexcept {
  double acc = 0.0;
  if (dim_ == 2) {
    for (int p = 0; p < 4; ++p) {
      const std::size_t ro = idx_[0][p] * stride_[0];
      double row = 0.0;
      for (int q = 0; q < 4; ++q) row += w_[1][q] * data[ro + idx_[1][q] * stride_[1]];
      acc += w_[0][p] * row;
    }
    return acc;
  }
  for (int p = 0; p < 4; ++p) {
    const std::size_t o0 = idx_[0][p] * stride_[0];
    double plane = 0.0;
    for (int q = 0; q < 4; ++q) {
      const std::size_t o1 = o0 + idx_[1][q] * stride_[1];
      double row = 0.0;
      for (int r = 0; r < 4; ++r) row += w_[2][r] * data[o1 + idx_[2][r]];
      plane += w_[1][q] * row;
    }
    acc += w_[0][p] * plane;
  }
  return acc;
}

double CubicStencil::apply_monotone(std::span<const double> data) const noexcept {
  const double v = apply(data);
  double lo = data[idx_[0][1] * stride_[0] + idx_[1][1] * stride_[1] + idx_[2][1]];
  double hi = lo;
  const int c2 = dim_ == 3 ? 2 : 1;
  for (int p = 1; p <= 2; ++p)
    for (int q = 1; q <= 2; ++q)
      for (int r = 1; r <= c2; ++r) {
        const double x = data[idx_[0][p] * stride_[0] + idx_[1][q] * stride_[1] + idx_[2][r]];
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
  return std::clamp(v, lo, hi);
}

template <int Rank>
std::vector<std::vector<double>> sample_at(const Field<Rank>& f, std::span<const Point> points) {
  require_finite(f, "sample_at");
  std::vector<std::vector<double>> out(points.size(),
                                       std::vector<double>(static_cast<std::size_t>(f.components())));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const CubicStencil st(f.grid(), points[p]);
    for (int c = 0; c < f.components(); ++c) out[p][static_cast<std::size_t>(c)] = st.apply(f.comp(c));
  }
  return out;
}

template std::vector<std::vector<double>> sample_at(const Field<0>&, std::span<const Point>);
template std::vector<std::vector<double>> sample_at(const Field<1>&, std::span<const Point>);
template std::vector<std::vector<double>> sample_at(const Field<2>&, std::span<const Point>);

}  // namespace viscoflow
