#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "viscoflow/monitors.hpp"
#include "viscoflow/stepper.hpp"

namespace viscoflow {

struct GridConfig {
  int dim = 2;
  int n = 32;
  double length = 6.283185307179586;

  bool operator==(const GridConfig&) const = default;
};

/// Initial-condition selector. Presets: equilibrium, acoustic,
/// compatible-deformation, incompatible, random-smooth, file.
struct InitialConfig {
  std::string preset = "equilibrium";
  double amplitude = 0.1;
  int wavenumber = 1;
  /// Velocity amplitude added on top of the preset (a divergence-free cell flow).
  double velocity = 0.0;
  std::string rho_file;
  std::string u_file;
  std::string F_file;

  bool operator==(const InitialConfig&) const = default;
};

struct SteppingConfig {
  StepConfig step{};
  double t_final = 0.1;

  bool operator==(const SteppingConfig&) const = default;
};

struct MonitorToggles {
  bool enabled = true;
  MonitorConfig monitor{};

  bool operator==(const MonitorToggles&) const = default;
};

struct OutputConfig {
  std::string directory = "viscoflow_out";
  std::string monitor_csv = "monitors.csv";
  /// Write a snapshot every k accepted steps; 0 writes only the initial and final states.
  int snapshot_every = 0;

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  GridConfig grid{};
  Physics physics{};
  InitialConfig initial{};
  SteppingConfig stepping{};
  MonitorToggles monitors{};
  OutputConfig output{};
  /// 0 keeps the OpenMP default.
  int threads = 0;
  std::uint64_t seed = 1;

  bool operator==(const RunConfig&) const = default;
};

/// Carries every problem found in a config, one message per entry.
class ConfigErrors : public ConfigError {
 public:
  explicit ConfigErrors(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Line-oriented `key = value` text with `[section]` headers; `#` and `;`
/// start comments. Throws ConfigErrors listing all problems.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Every key, in canonical order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Constraint checks alone; empty when valid.
std::vector<std::string> validate_config(const RunConfig& c);

}  // namespace viscoflow
