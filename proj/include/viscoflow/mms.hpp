#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "viscoflow/stepper.hpp"

namespace viscoflow {

/// Value and derivatives of a scalar function at one space-time point.
struct Jet {
  double value = 0.0;
  double dt = 0.0;
  std::array<double, 3> grad{};
  std::array<std::array<double, 3>, 3> hess{};
};

/// coef * T(omega t) * X0(k0 x0) * X1(k1 x1) * X2(k2 x2), each factor one of
/// {1, sin, cos}.
struct TrigTerm {
  enum class Kind { kOne, kSin, kCos };
  double coef = 0.0;
  Kind time = Kind::kOne;
  double omega = 0.0;
  std::array<Kind, 3> space{Kind::kOne, Kind::kOne, Kind::kOne};
  std::array<int, 3> k{0, 0, 0};
};

/// Closed-form sum of trig terms, differentiated analytically.
struct TrigSum {
  std::vector<TrigTerm> terms;
  Jet evaluate(const Point& x, double t) const;
};

/// Exact rho, u (3 components) and F (3x3, row-major) of a built-in case.
/// Only the leading dim components are used on a dim-dimensional grid.
struct ManufacturedCase {
  std::string name;
  TrigSum rho;
  std::array<TrigSum, 3> u;
  std::array<TrigSum, 9> F;
  Physics physics;
  double t_final = 0.1;
  /// Smallest grid dimension the case is defined for.
  int min_dim = 2;
};

/// Built-in catalog: "equilibrium", "traveling-wave", "rotating-deformation".
ManufacturedCase manufactured_case(const std::string& name);
std::vector<std::string> manufactured_case_names();

struct PointSources {
  double rho = 0.0;
  std::array<double, 3> u{};
  std::array<double, 9> F{};
};

/// Residuals of the three equations under the exact fields at one point.
PointSources manufactured_sources_at(const ManufacturedCase& c, int dim, const Point& x, double t);

/// g_rho, g_u, g_F sampled on the grid at time t.
Sources manufactured_sources(const ManufacturedCase& c, const Grid& grid, double t);

/// Exact fields sampled on the grid.
State exact_state(const ManufacturedCase& c, const Grid& grid, double t);

class ManufacturedForcing final : public Forcing {
 public:
  explicit ManufacturedForcing(ManufacturedCase c) : case_(std::move(c)) {}
  Sources evaluate(const Grid& grid, double t) const override { return manufactured_sources(case_, grid, t); }

 private:
  ManufacturedCase case_;
};

struct EocLevel {
  int n = 0;
  double dt = 0.0;
  int steps = 0;
  double err_rho = 0.0;
  double err_u = 0.0;
  double err_F = 0.0;
};

struct EocTable {
  std::string case_name;
  std::vector<EocLevel> levels;
  /// Per refinement pair (coarse -> fine): log2 error ratios; "exact" rows
  /// when both errors sit at round-off.
  std::vector<std::array<double, 3>> orders;
  std::vector<std::array<bool, 3>> exact;

  std::string to_csv() const;
};

/// Runs the forced system to the case's t_final on each (n, dt) level and
/// reports L2 errors and empirical orders. Needs at least three levels.
EocTable convergence_study(const ManufacturedCase& c, int dim, const std::vector<int>& grids,
                           const std::vector<double>& dts, const StepConfig& base);

/// Round-off threshold below which an error pair is reported as exact.
inline constexpr double kRoundoffError = 1e-12;

}  // namespace viscoflow
