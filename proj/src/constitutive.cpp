#include "viscoflow/constitutive.hpp"

#include <cmath>
#include <string>

#include "viscoflow/operators.hpp"
#include "viscoflow/parallel.hpp"

namespace viscoflow {

double PressureLaw::operator()(double rho) const {
  if (gamma == 1.0) return a * rho;
  return a * std::pow(rho, gamma);
}

double PressureLaw::derivative(double rho) const {
  if (gamma == 1.0) return a;
  return a * gamma * std::pow(rho, gamma - 1.0);
}

double PressureLaw::potential(double rho) const {
  if (gamma == 1.0) return a * rho * std::log(rho);
  return a * std::pow(rho, gamma) / (gamma - 1.0);
}

void PressureLaw::validate() const {
  if (!(a > 0.0)) throw PreconditionError("pressure law needs a > 0");
  if (!(gamma >= 1.0)) throw PreconditionError("pressure law needs gamma >= 1");
}

Matrix Matrix::identity(int d) {
  Matrix m(d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  Matrix r(x.dim);
  for (int i = 0; i < x.dim; ++i)
    for (int j = 0; j < x.dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < x.dim; ++k) s += x(i, k) * y(k, j);
      r(i, j) = s;
    }
  return r;
}

double determinant(const Matrix& m) {
  if (m.dim == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double EnergyDensity::operator()(const Matrix& f) const {
  if (w_) return w_(f);
  double s = 0.0;
  for (double x : f.a) s += x * x;
  return 0.5 * s;
}

ScalarField pressure(const ScalarField& rho, const PressureLaw& law) {
  require_finite(rho, "pressure");
  ScalarField p(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0)) {
      const auto m = rho.grid().multi_index(i);
      throw PreconditionError("pressure: nonpositive density " + std::to_string(rho[i]) +
                              " at cell (" + std::to_string(m[0]) + "," + std::to_string(m[1]) +
                              "," + std::to_string(m[2]) + ")");
    }
    p[i] = law(rho[i]);
  }
  return p;
}

Matrix piola_stress(const Matrix& f, const EnergyDensity& w) {
  if (w.is_hookean()) return f;
  return piola_stress_numeric(f, w);
}

Matrix piola_stress_numeric(const Matrix& f, const EnergyDensity& w) {
  const double step = 1e-6 * (1.0 + f.frobenius());
  Matrix s(f.dim);
  Matrix probe = f;
  for (std::size_t k = 0; k < f.a.size(); ++k) {
    const double orig = probe.a[k];
    probe.a[k] = orig + step;
    const double wp = w(probe);
    probe.a[k] = orig - step;
    const double wm = w(probe);
    probe.a[k] = orig;
    s.a[k] = (wp - wm) / (2.0 * step);
  }
  return s;
}

TensorField cauchy_elastic_stress(const ScalarField& rho, const TensorField& f) {
  require_same_grid(rho, f, "cauchy_elastic_stress");
  const int d = f.dim();
  TensorField t(f.grid());
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        auto out = t.comp(i, j);
        for (std::size_t n = b; n < e; ++n) {
          double s = 0.0;
          for (int k = 0; k < d; ++k) s += f.comp(i, k)[n] * f.comp(j, k)[n];
          out[n] = rho[n] * s;
        }
      }
  });
  return t;
}

VectorField cauchy_elastic_source(const ScalarField& rho, const TensorField& f) {
  return apply_tensor_divergence(cauchy_elastic_stress(rho, f));
}

ScalarField elastic_energy_density(const TensorField& f) {
  ScalarField w(f.grid());
  for (int c = 0; c < f.components(); ++c) {
    const auto d = f.comp(c);
    for (std::size_t i = 0; i < f.size(); ++i) w[i] += d[i] * d[i];
  }
  for (std::size_t i = 0; i < f.size(); ++i) w[i] *= 0.5;
  return w;
}

Matrix tensor_at(const TensorField& f, std::size_t idx) {
  Matrix m(f.dim());
  for (int c = 0; c < f.components(); ++c) m.a[static_cast<std::size_t>(c)] = f.comp(c)[idx];
  return m;
}

ScalarField determinant_field(const TensorField& f) {
  ScalarField out(f.grid());
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) out[n] = determinant(tensor_at(f, n));
  });
  return out;
}

}  // namespace viscoflow
