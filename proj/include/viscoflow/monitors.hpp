#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "viscoflow/state.hpp"
#include "viscoflow/transport.hpp"

namespace viscoflow {

/// One row of invariant diagnostics. Column order of the CSV follows the
/// member order below.
struct MonitorReport {
  double t = 0.0;
  double mass = 0.0;
  double curl_defect_max = 0.0;
  double curl_bound = 0.0;
  double div_rhoFt_norm = 0.0;
  /// Absent when no characteristic feet were tracked.
  std::optional<double> volume_defect;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double envelope_lo = 0.0;
  double envelope_hi = 0.0;
  double F_norm_q = 0.0;
  double F_norm_q_bound = 0.0;
  double kinetic = 0.0;
  double elastic = 0.0;
  double grad_u_L2 = 0.0;
  int picard_iters = 0;
  int lame_iters = 0;
  double potential = 0.0;
  double dt = 0.0;
  double lame_residual = 0.0;
};

struct BoundCheck {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double bound = 0.0;
  /// bound + allowance - value; negative on failure.
  double slack = 0.0;
};

struct CurlDefect {
  ScalarField field;
  double max = 0.0;
};

struct EnergyReport {
  double kinetic = 0.0;
  double elastic = 0.0;
  double grad_u_L2 = 0.0;
  double potential = 0.0;
  double total() const noexcept { return kinetic + elastic + potential; }
};

/// Pointwise max over (i,j,k) of |F_lk d_l F_ij - F_lj d_l F_ik|, by direct
/// index summation.
CurlDefect curl_defect(const TensorField& F);

/// Passes iff Mt <= M0 exp(2 * trapezoid(grad_u_inf over times)) + allowance.
BoundCheck curl_growth_check(std::span<const double> times, std::span<const double> grad_u_inf,
                             double M0, double Mt, double allowance);

/// Discrete L2 norm of div(rho F^T), i.e. component i is sum_j d_j(rho F_ji).
double elastic_compatibility_divergence(const ScalarField& rho, const TensorField& F);

/// L-infinity of rho detF(x) - (rho0 detF0)(X0(x)) where X0(x) = x + displacement(x)
/// is the composed backward characteristic map to time zero.
std::optional<double> material_volume_defect(const State& s, const State& s0,
                                             const VectorField* displacement);

/// Running integrals the a-priori bounds need, advanced once per accepted step.
struct BoundAccumulators {
  double alpha = 0.0;  // min rho0
  double beta = 0.0;   // max rho0
  /// alpha exp(-int |div v|_inf) and beta exp(+int |div v|_inf), kept as running
  /// products with the same per-step factors the density transport applies.
  double envelope_lo = 0.0;
  double envelope_hi = 0.0;
  double int_div_inf = 0.0;
  double F0_norm = 0.0;       // ||F0||_{W1q} + ||F0||_{H1}
  double int_v_w2q = 0.0;     // trapezoid of the W^{2,q} surrogate of the velocity
  double q = 4.0;
  double envelope_allowance = 0.0;
};

/// Density envelopes and the F-norm bound for one state.
std::vector<BoundCheck> envelope_and_norm_checks(const State& s, const BoundAccumulators& acc);

EnergyReport energy_report(const State& s, const PressureLaw& law);

/// ||v||_Lq + ||grad v||_Lq + ||grad grad v||_Lq
double w2q_norm(const VectorField& v, double q);

/// max over nodes of the Frobenius norm of grad u
double grad_inf_norm(const VectorField& u);

struct MonitorConfig {
  double q = 4.0;
  /// Curl-growth allowance; negative selects 10 h^2 with h the largest spacing.
  double curl_allowance = -1.0;
  double envelope_allowance = 0.0;
  /// Throw InvariantFailure when a bound check fails (after recording the row).
  bool fatal = false;

  bool operator==(const MonitorConfig&) const = default;
};

/// Stateful monitor: captures the initial data, accumulates the time
/// integrals and composed feet, and emits one MonitorReport per step.
/// Never modifies the states it inspects.
class MonitorSuite {
 public:
  MonitorSuite(const State& initial, const Physics& phys, MonitorConfig cfg = {});

  const MonitorReport& initial_report() const noexcept { return reports_.front(); }
  const std::vector<MonitorReport>& reports() const noexcept { return reports_; }
  /// Checks evaluated for the most recent report.
  const std::vector<BoundCheck>& last_checks() const noexcept { return last_checks_; }
  /// True when every check of every report so far passed.
  bool all_passed() const noexcept { return all_passed_; }
  const BoundAccumulators& accumulators() const noexcept { return acc_; }
  const VectorField& displacement() const noexcept { return displacement_; }
  double curl_allowance() const noexcept { return curl_allowance_; }

  /// Advance accumulators with an accepted step ending in s and append a report.
  /// dp are the feet the step transported along; pass nullptr when unknown.
  const MonitorReport& record_step(const State& s, const DeparturePoints* dp, double dt, int picard_iters,
                                   int lame_iters, double lame_residual);

  /// Report for a standalone state, without time history.
  static MonitorReport snapshot_report(const State& s, const Physics& phys, double q = 4.0);

 private:
  MonitorReport build_report(const State& s) const;

  Physics phys_;
  MonitorConfig cfg_;
  State initial_;
  ScalarField material0_;  // rho0 det F0
  VectorField displacement_;
  bool feet_valid_ = true;
  double curl0_ = 0.0;
  double curl_allowance_ = 0.0;
  std::vector<double> times_;
  std::vector<double> grad_inf_;
  double last_w2q_ = 0.0;
  BoundAccumulators acc_;
  std::vector<MonitorReport> reports_;
  std::vector<BoundCheck> last_checks_;
  bool all_passed_ = true;
};

std::string monitor_csv_header();
std::string monitor_csv_row(const MonitorReport& r);

/// Append-only CSV sink: header on open, one flushed row per report.
class MonitorCsvWriter {
 public:
  explicit MonitorCsvWriter(const std::filesystem::path& path);
  void write(const MonitorReport& r);

 private:
  std::filesystem::path path_;
  std::ofstream os_;
};

}  // namespace viscoflow
