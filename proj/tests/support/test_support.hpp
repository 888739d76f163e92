#pragma once

// Independent oracles for the unit and acceptance tests. Nothing here calls
// into the library's differential operators.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "viscoflow/field.hpp"
#include "viscoflow/grid.hpp"

namespace vf_test {

using viscoflow::Grid;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Hyper-dual numbers: one evaluation yields f, df/de1, df/de2, d2f/de1de2.

struct HD {
  double v = 0.0, a = 0.0, b = 0.0, ab = 0.0;
  HD() = default;
  HD(double x) : v(x) {}  // NOLINT(google-explicit-constructor)
  HD(double v_, double a_, double b_, double ab_) : v(v_), a(a_), b(b_), ab(ab_) {}
};

inline HD operator+(HD x, HD y) { return {x.v + y.v, x.a + y.a, x.b + y.b, x.ab + y.ab}; }
inline HD operator-(HD x, HD y) { return {x.v - y.v, x.a - y.a, x.b - y.b, x.ab - y.ab}; }
inline HD operator-(HD x) { return {-x.v, -x.a, -x.b, -x.ab}; }
inline HD operator*(HD x, HD y) {
  return {x.v * y.v, x.a * y.v + x.v * y.a, x.b * y.v + x.v * y.b, x.ab * y.v + x.a * y.b + x.b * y.a + x.v * y.ab};
}
// chain rule for a scalar function with value f0, f1 = f', f2 = f''
inline HD chain(HD x, double f0, double f1, double f2) {
  return {f0, f1 * x.a, f1 * x.b, f1 * x.ab + f2 * x.a * x.b};
}
inline HD sin(HD x) { return chain(x, std::sin(x.v), std::cos(x.v), -std::sin(x.v)); }
inline HD cos(HD x) { return chain(x, std::cos(x.v), -std::sin(x.v), -std::cos(x.v)); }
inline HD pow(HD x, double p) {
  return chain(x, std::pow(x.v, p), p * std::pow(x.v, p - 1.0), p * (p - 1.0) * std::pow(x.v, p - 2.0));
}

/// Space-time point: x[0..2], t. Functions are templated over the scalar type.
using ScalarFn = std::function<HD(const HD* x, const HD& t)>;

/// d/dz_p and d2/dz_p dz_q where z = (x0, x1, x2, t).
struct Partials {
  double value = 0.0;
  double d[4]{};
  double dd[4][4]{};
};

inline Partials partials(const ScalarFn& f, const double* x, double t) {
  Partials p;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      HD z[4];
      for (int k = 0; k < 3; ++k) z[k] = HD(x[k]);
      z[3] = HD(t);
      z[i].a = 1.0;
      z[j].b = 1.0;
      const HD r = f(z, z[3]);
      p.value = r.v;
      p.d[i] = r.a;
      p.d[j] = r.b;
      p.dd[i][j] = p.dd[j][i] = r.ab;
    }
  return p;
}

// ---------------------------------------------------------------------------
// Spectral differentiation by direct DFT (small grids only).

/// Derivative of order (o0, o1, o2) of a periodic sample array, band-limited
/// interpretation with the Nyquist mode dropped from odd derivatives.
inline std::vector<double> spectral_derivative(const Grid& g, std::span<const double> f, std::array<int, 3> order) {
  const int n0 = g.n(0), n1 = g.n(1), n2 = g.n(2);
  const std::size_t N = g.size();
  using C = std::complex<double>;
  std::vector<C> hat(N);
  auto wn = [](int i, int n, double len) {
    const int k = i <= n / 2 ? i : i - n;
    return std::array<double, 2>{2.0 * kPi * k / len, (2 * i == n) ? 1.0 : 0.0};
  };
  auto dft_axis = [&](std::vector<C>& a, int axis, double sign) {
    const int n = g.n(axis);
    if (n == 1) return;
    std::vector<C> tmp(static_cast<std::size_t>(n));
    for (int i0 = 0; i0 < n0; ++i0)
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
          int idx[3] = {i0, i1, i2};
          if (idx[axis] != 0) continue;
          for (int k = 0; k < n; ++k) {
            C s = 0.0;
            for (int j = 0; j < n; ++j) {
              idx[axis] = j;
              s += a[g.index(idx[0], idx[1], idx[2])] * std::polar(1.0, sign * 2.0 * kPi * k * j / n);
            }
            tmp[static_cast<std::size_t>(k)] = s;
          }
          for (int k = 0; k < n; ++k) {
            idx[axis] = k;
            a[g.index(idx[0], idx[1], idx[2])] = tmp[static_cast<std::size_t>(k)];
          }
        }
  };
  for (std::size_t i = 0; i < N; ++i) hat[i] = f[i];
  for (int a = 0; a < 3; ++a) dft_axis(hat, a, -1.0);
  for (std::size_t i = 0; i < N; ++i) {
    const auto m = g.multi_index(i);
    C factor = 1.0;
    for (int a = 0; a < 3; ++a) {
      if (order[a] == 0) continue;
      const auto [k, nyq] = wn(m[a], g.n(a), g.length(a));
      if (nyq != 0.0 && order[a] % 2 == 1) factor = 0.0;
      factor *= std::pow(C(0.0, k), order[a]);
    }
    hat[i] *= factor;
  }
  for (int a = 0; a < 3; ++a) dft_axis(hat, a, +1.0);
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = hat[i].real() / static_cast<double>(N);
  return out;
}

// ---------------------------------------------------------------------------
// Random smooth (band-limited) data.

struct Mode {
  double c;
  int k[3];
  double phase;
};

inline std::vector<Mode> random_modes(std::mt19937_64& rng, int dim, int count, int kmax, double amp) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> K(-kmax, kmax);
  std::vector<Mode> m;
  for (int i = 0; i < count; ++i) {
    Mode mode{amp * U(rng), {0, 0, 0}, kPi * U(rng)};
    for (int a = 0; a < dim; ++a) mode.k[a] = K(rng);
    m.push_back(mode);
  }
  return m;
}

inline double eval_modes(const std::vector<Mode>& m, const std::array<double, 3>& x) {
  double v = 0.0;
  for (const auto& mode : m) v += mode.c * std::sin(mode.k[0] * x[0] + mode.k[1] * x[1] + mode.k[2] * x[2] + mode.phase);
  return v;
}

template <int Rank>
viscoflow::Field<Rank> random_smooth_field(const Grid& g, std::uint64_t seed, double amp, double offset = 0.0,
                                            int kmax = 2) {
  std::mt19937_64 rng(seed);
  viscoflow::Field<Rank> f(g);
  for (int c = 0; c < f.components(); ++c) {
    const auto m = random_modes(rng, g.dim(), 4, kmax, amp / 4.0);
    auto out = f.comp(c);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = offset + eval_modes(m, g.node_position(i));
  }
  return f;
}

/// Same with identity added on the diagonal of a tensor.
inline viscoflow::TensorField random_smooth_deformation(const Grid& g, std::uint64_t seed, double amp) {
  auto F = random_smooth_field<2>(g, seed, amp);
  for (int i = 0; i < g.dim(); ++i)
    for (auto& x : F.comp(i, i)) x += 1.0;
  return F;
}

template <int Rank>
viscoflow::Field<Rank> random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  viscoflow::Field<Rank> f(g);
  for (int c = 0; c < f.components(); ++c)
    for (auto& x : f.comp(c)) x = U(rng);
  return f;
}

// ---------------------------------------------------------------------------

template <int Rank>
double max_abs_diff(const viscoflow::Field<Rank>& a, const viscoflow::Field<Rank>& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.comp(c)[i] - b.comp(c)[i]));
  return m;
}

template <int Rank>
double max_abs(const viscoflow::Field<Rank>& a) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (double x : a.comp(c)) m = std::max(m, std::abs(x));
  return m;
}

/// Plain sequential sum of squares times the cell volume, then sqrt.
template <int Rank>
double l2_diff(const viscoflow::Field<Rank>& a, const viscoflow::Field<Rank>& b) {
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a.comp(c)[i] - b.comp(c)[i];
      s += d * d;
    }
  return std::sqrt(s * a.grid().cell_volume());
}

inline double eoc(double coarse, double fine, double ratio = 2.0) { return std::log(coarse / fine) / std::log(ratio); }

/// FNV-1a over the raw bytes of every component.
template <int Rank>
std::uint64_t hash_field(const viscoflow::Field<Rank>& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (int c = 0; c < f.components(); ++c)
    for (double x : f.comp(c)) {
      const auto* p = reinterpret_cast<const unsigned char*>(&x);
      for (std::size_t k = 0; k < sizeof(double); ++k) {
        h ^= p[k];
        h *= 1099511628211ull;
      }
    }
  return h;
}

}  // namespace vf_test
