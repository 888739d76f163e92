#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "viscoflow/config.hpp"
#include "viscoflow/errors.hpp"

namespace viscoflow {

/// Subcommands: run, mms, check, bench. Failures print one line
/// `error: code=<n> kind=<kind> message="<text>"` to err and return the code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The `run` subcommand body: initial state, run_simulation, monitor CSV and
/// snapshots under c.output.directory. Throws on failure.
struct RunOutcome {
  int steps = 0;
  int rejected_attempts = 0;
  double final_time = 0.0;
  bool monitors_passed = true;
};
RunOutcome execute_run(const RunConfig& c, std::ostream& out);

/// Thread count after applying VISCOFLOW_THREADS over the configured value (0 = default).
int resolve_thread_count(int configured);

std::string error_line(ExitCode code, const std::string& kind, const std::string& message);

}  // namespace viscoflow
