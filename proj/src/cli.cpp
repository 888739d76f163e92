#include "viscoflow/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "viscoflow/bench.hpp"
#include "viscoflow/field_io.hpp"
#include "viscoflow/initial.hpp"
#include "viscoflow/mms.hpp"
#include "viscoflow/monitors.hpp"
#include "viscoflow/parallel.hpp"
#include "viscoflow/snapshot.hpp"

namespace viscoflow {

namespace fs = std::filesystem;

std::string error_line(ExitCode code, const std::string& kind, const std::string& message) {
  std::string m;
  for (char ch : message) {
    if (ch == '"' || ch == '\\') m += '\\';
    if (ch == '\n') {
      m += "\\n";
      continue;
    }
    m += ch;
  }
  return "error: code=" + std::to_string(static_cast<int>(code)) + " kind=" + kind + " message=\"" + m + "\"";
}

int resolve_thread_count(int configured) {
  if (const char* env = std::getenv("VISCOFLOW_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("VISCOFLOW_THREADS='" + std::string(env) + "' is not a positive integer");
    return static_cast<int>(v);
  }
  return configured;
}

namespace {

void apply_threads(int configured) {
  const int t = resolve_thread_count(configured);
  if (t > 0) set_thread_count(t);
}

std::string trim_newline(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

void print_report(std::ostream& out, const MonitorReport& r) {
  const auto names = trim_newline(monitor_csv_header());
  const auto values = trim_newline(monitor_csv_row(r));
  // header and row share the column order
  std::size_t a = 0, b = 0;
  for (;;) {
    const auto ea = names.find(',', a), eb = values.find(',', b);
    out << names.substr(a, ea - a) << " = " << values.substr(b, eb - b) << '\n';
    if (ea == std::string::npos || eb == std::string::npos) break;
    a = ea + 1;
    b = eb + 1;
  }
}

}  // namespace

RunOutcome execute_run(const RunConfig& c, std::ostream& out) {
  apply_threads(c.threads);
  const State init = initial_state(c);
  const fs::path dir = c.output.directory;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  {
    std::ofstream cfg(dir / "run.cfg");
    if (!cfg) throw IoError("cannot write " + (dir / "run.cfg").string());
    cfg << serialize_config(c);
  }
  // a fresh index per run
  fs::remove(dir / "snapshots.index", ec);

  std::optional<MonitorSuite> suite;
  std::optional<MonitorCsvWriter> csv;
  std::size_t rows_written = 0;
  if (c.monitors.enabled) {
    suite.emplace(init, c.physics, c.monitors.monitor);
    csv.emplace(dir / c.output.monitor_csv);
    csv->write(suite->initial_report());
    rows_written = 1;
  }
  auto flush_rows = [&] {
    if (!suite) return;
    for (; rows_written < suite->reports().size(); ++rows_written) csv->write(suite->reports()[rows_written]);
  };

  int snapshot_index = 0;
  write_snapshot(init, dir, snapshot_index++);
  int last_snapshot_step = 0;
  const int every = c.output.snapshot_every;
  auto observer = [&](const StepResult& res, int step) {
    flush_rows();
    if (every > 0 && step % every == 0) {
      write_snapshot(res.state, dir, snapshot_index++);
      last_snapshot_step = step;
    }
  };

  RunSummary summary;
  try {
    summary = run_simulation(init, c.stepping.t_final, c.stepping.step, c.physics, suite ? &*suite : nullptr,
                             observer);
  } catch (...) {
    flush_rows();
    throw;
  }
  if (last_snapshot_step != summary.steps) write_snapshot(summary.final_state, dir, snapshot_index++);

  RunOutcome o{summary.steps, summary.rejected_attempts, summary.final_state.t, !suite || suite->all_passed()};
  out << "steps = " << o.steps << '\n'
      << "rejected_attempts = " << o.rejected_attempts << '\n'
      << "final_time = " << format_double(o.final_time) << '\n'
      << "picard_iterations = " << summary.total_picard_iterations << '\n'
      << "lame_iterations = " << summary.total_lame_iterations << '\n'
      << "smallest_dt = " << format_double(summary.smallest_dt) << '\n'
      << "monitors = " << (suite ? (o.monitors_passed ? "pass" : "fail") : "disabled") << '\n';
  if (suite) {
    for (const auto& chk : suite->last_checks()) {
      out << "check " << chk.name << " = " << (chk.passed ? "pass" : "fail") << " value=" << format_double(chk.value)
          << " bound=" << format_double(chk.bound) << '\n';
    }
  }
  return o;
}

namespace {

int run_mms(const std::string& case_name, int dim, const std::vector<int>& levels, double dt0,
            const std::string& scaling, double t_final, const std::string& csv_path, const std::string& pc,
            std::ostream& out) {
  ManufacturedCase c = manufactured_case(case_name);
  if (t_final > 0.0) c.t_final = t_final;
  if (scaling != "h" && scaling != "h2") throw ConfigError("--dt-scaling must be h or h2");
  if (!(dt0 > 0.0)) throw ConfigError("--dt violates dt > 0");
  std::vector<double> dts;
  for (int n : levels) {
    const double r = static_cast<double>(levels.front()) / n;
    dts.push_back(dt0 * (scaling == "h" ? r : r * r));
  }
  StepConfig base;
  base.preconditioner = parse_preconditioner(pc);
  const EocTable table = convergence_study(c, dim, levels, dts, base);
  const std::string text = table.to_csv();
  out << text;
  if (!csv_path.empty()) {
    std::ofstream os(csv_path);
    if (!os || !(os << text)) throw IoError("cannot write EOC table to " + csv_path);
  }
  return 0;
}

int run_check(const std::string& snapshot, double length, const std::string& config_path, double mu, double lambda,
              double a, double gamma, double q, std::ostream& out) {
  Physics phys;
  if (!config_path.empty()) {
    const RunConfig c = load_config(config_path);
    phys = c.physics;
    length = c.grid.length;
  }
  if (!std::isnan(mu)) phys.mu = mu;
  if (!std::isnan(lambda)) phys.lambda = lambda;
  if (!std::isnan(a)) phys.law.a = a;
  if (!std::isnan(gamma)) phys.law.gamma = gamma;
  phys.validate();
  const State s = read_snapshot(snapshot, length);
  s.validate();
  print_report(out, MonitorSuite::snapshot_report(s, phys, q));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"viscoflow: compressible viscoelastic flow solver on a periodic box", "viscoflow"};
  app.require_subcommand(1);

  std::string config_path, output_override;
  int threads_flag = -1;
  auto* run = app.add_subcommand("run", "Run a simulation from a config file");
  run->add_option("--config,-c", config_path, "Run configuration file")->required();
  run->add_option("--output,-o", output_override, "Override output.directory");
  run->add_option("--threads", threads_flag, "Override run.threads");

  std::string mms_case = "traveling-wave", dt_scaling = "h", mms_csv, mms_pc = "fft";
  int mms_dim = 2;
  std::vector<int> mms_levels{16, 32, 64};
  double mms_dt = 0.05, mms_tf = 0.0;
  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("--case", mms_case, "equilibrium | traveling-wave | rotating-deformation");
  mms->add_option("--dim", mms_dim, "2 or 3");
  mms->add_option("--levels", mms_levels, "Grid sizes, coarse to fine")->delimiter(',');
  mms->add_option("--dt", mms_dt, "Step on the coarsest level");
  mms->add_option("--dt-scaling", dt_scaling, "h (dt ~ h) or h2 (dt ~ h^2)");
  mms->add_option("--t-final", mms_tf, "Override the case horizon");
  mms->add_option("--csv", mms_csv, "Also write the EOC table here");
  mms->add_option("--preconditioner", mms_pc, "none | jacobi | fft");

  std::string snap, check_cfg;
  double length = 6.283185307179586, q = 4.0;
  const double nan = std::nan("");
  double mu = nan, lam = nan, pa = nan, pg = nan;
  auto* check = app.add_subcommand("check", "Print the monitor report of a snapshot");
  check->add_option("snapshot", snap, "Snapshot directory (snapshot_<i>)")->required();
  check->add_option("--length", length, "Box length");
  check->add_option("--config", check_cfg, "Take physics and box length from a run config");
  check->add_option("--mu", mu);
  check->add_option("--lambda", lam);
  check->add_option("--pressure-a", pa);
  check->add_option("--pressure-gamma", pg);
  check->add_option("--q", q, "Lq exponent");

  std::vector<int> bench_n{32, 64};
  int bench_dim = 3, repeats = 3;
  auto* bench = app.add_subcommand("bench", "Time operators, transport and Lame solves");
  bench->add_option("--n", bench_n, "Grid sizes")->delimiter(',');
  bench->add_option("--dim", bench_dim, "2 or 3");
  bench->add_option("--repeats", repeats, "Best-of count");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }

    if (*run) {
      RunConfig c = load_config(config_path);
      if (!output_override.empty()) c.output.directory = output_override;
      if (threads_flag >= 0) c.threads = threads_flag;
      execute_run(c, out);
      return 0;
    }
    apply_threads(0);
    if (*mms) return run_mms(mms_case, mms_dim, mms_levels, mms_dt, dt_scaling, mms_tf, mms_csv, mms_pc, out);
    if (*check) return run_check(snap, length, check_cfg, mu, lam, pa, pg, q, out);
    if (*bench) {
      out << bench_table(run_bench(bench_dim, bench_n, repeats));
      return 0;
    }
    return 0;
  } catch (const ConfigErrors& e) {
    err << error_line(e.code(), e.kind(), e.what()) << '\n';
    for (const auto& m : e.errors()) err << "  " << m << '\n';
    return static_cast<int>(e.code());
  } catch (const Error& e) {
    err << error_line(e.code(), e.kind(), e.what()) << '\n';
    return static_cast<int>(e.code());
  } catch (const fs::filesystem_error& e) {
    err << error_line(ExitCode::kIo, "io", e.what()) << '\n';
    return static_cast<int>(ExitCode::kIo);
  } catch (const std::exception& e) {
    err << error_line(ExitCode::kDivergence, "internal", trim_newline(e.what())) << '\n';
    return static_cast<int>(ExitCode::kDivergence);
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"viscoflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace viscoflow
