#pragma once

#include <stdexcept>
#include <string>

namespace viscoflow {

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  kSuccess = 0,
  kConfig = 2,
  kDivergence = 3,
  kInvariant = 4,
  kIo = 5,
};

/// Base of every error the library throws. Each error knows which exit code
/// the CLI should surface for it.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, std::string kind, const std::string& what)
      : std::runtime_error(what), code_(code), kind_(std::move(kind)) {}

  ExitCode code() const noexcept { return code_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  ExitCode code_;
  std::string kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, "config", what) {}
};

/// A caller violated an operation's precondition (bad shape, nonpositive density, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ExitCode::kConfig, "precondition", what) {}
};

/// NaN or Inf reached a field.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what)
      : Error(ExitCode::kDivergence, "non_finite", what) {}
};

class SolverDivergence : public Error {
 public:
  SolverDivergence(std::string kind, const std::string& what)
      : Error(ExitCode::kDivergence, std::move(kind), what) {}
};

class InvariantFailure : public Error {
 public:
  explicit InvariantFailure(const std::string& what)
      : Error(ExitCode::kInvariant, "invariant", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::kIo, "io", what) {}
};

}  // namespace viscoflow
