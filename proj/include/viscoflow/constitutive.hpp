#pragma once

#include <functional>
#include <vector>

#include "viscoflow/field.hpp"

namespace viscoflow {

/// Gamma-law pressure P(rho) = a * rho^gamma.
struct PressureLaw {
  double a = 1.0;
  double gamma = 1.4;

  double operator()(double rho) const;
  /// dP/drho
  double derivative(double rho) const;
  /// Pressure potential Pi with rho Pi'(rho) - Pi(rho) = P(rho):
  /// a rho^gamma / (gamma - 1), or a rho log rho when gamma == 1.
  double potential(double rho) const;
  /// Throws PreconditionError unless a > 0 and gamma >= 1.
  void validate() const;
  bool operator==(const PressureLaw&) const = default;
};

/// Small dense d x d matrix, row-major.
struct Matrix {
  int dim = 3;
  std::vector<double> a;

  Matrix() : Matrix(3) {}
  explicit Matrix(int d, double fill = 0.0) : dim(d), a(static_cast<std::size_t>(d * d), fill) {}
  static Matrix identity(int d);

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * dim + j)]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * dim + j)]; }
  double frobenius() const;
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

Matrix operator*(const Matrix& x, const Matrix& y);
double determinant(const Matrix& m);

/// Stored energy W(F). The Hookean default W = |F|^2 / 2 has an analytic stress.
class EnergyDensity {
 public:
  /// Hookean energy.
  EnergyDensity() = default;
  explicit EnergyDensity(std::function<double(const Matrix&)> w) : w_(std::move(w)) {}

  bool is_hookean() const noexcept { return !w_; }
  double operator()(const Matrix& f) const;

 private:
  std::function<double(const Matrix&)> w_;
};

/// Pointwise a * rho^gamma; nonpositive density is a PreconditionError naming the cell.
ScalarField pressure(const ScalarField& rho, const PressureLaw& law);

/// S_ij = dW/dF_ij. Hookean energy returns F itself; any other energy uses a
/// central difference per entry with step 1e-6 * (1 + |F|).
Matrix piola_stress(const Matrix& f, const EnergyDensity& w);
/// Forces the finite-difference route even for the Hookean energy.
Matrix piola_stress_numeric(const Matrix& f, const EnergyDensity& w);

/// Pointwise rho F F^T.
TensorField cauchy_elastic_stress(const ScalarField& rho, const TensorField& f);
/// div(rho F F^T), row-wise.
VectorField cauchy_elastic_source(const ScalarField& rho, const TensorField& f);

/// Pointwise |F|^2 / 2.
ScalarField elastic_energy_density(const TensorField& f);

/// Pointwise det F.
ScalarField determinant_field(const TensorField& f);

/// Matrix of one grid node of a tensor field.
Matrix tensor_at(const TensorField& f, std::size_t idx);

}  // namespace viscoflow
