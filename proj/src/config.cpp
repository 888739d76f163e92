#include "viscoflow/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "viscoflow/field_io.hpp"
#include "viscoflow/grid.hpp"

namespace viscoflow {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "; " : "") + v[i];
  return out;
}

bool to_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

bool to_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtoll(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

bool to_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return out = true, true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return out = false, true;
  return false;
}

// Returns an error message, empty on success.
using Setter = std::function<std::string(const std::string&, RunConfig&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
  std::string section;
  std::string name;
  Setter set;
  Getter get;
};

template <class Access>
Key real_key(std::string sec, std::string name, Access acc) {
  return {sec, name,
          [acc](const std::string& v, RunConfig& c) -> std::string {
            double x;
            if (!to_double(v, x)) return "expected a finite number, got '" + v + "'";
            acc(c) = x;
            return {};
          },
          [acc](const RunConfig& c) { return format_double(acc(c)); }};
}

template <class T, class Access>
Key int_key(std::string sec, std::string name, Access acc) {
  return {sec, name,
          [acc](const std::string& v, RunConfig& c) -> std::string {
            long long x;
            if (!to_int(v, x)) return "expected an integer, got '" + v + "'";
            if constexpr (std::is_unsigned_v<T>) {
              if (x < 0) return "expected a nonnegative integer, got '" + v + "'";
            }
            acc(c) = static_cast<T>(x);
            return {};
          },
          [acc](const RunConfig& c) { return std::to_string(acc(c)); }};
}

template <class Access>
Key bool_key(std::string sec, std::string name, Access acc) {
  return {sec, name,
          [acc](const std::string& v, RunConfig& c) -> std::string {
            bool x;
            if (!to_bool(v, x)) return "expected true or false, got '" + v + "'";
            acc(c) = x;
            return {};
          },
          [acc](const RunConfig& c) { return std::string(acc(c) ? "true" : "false"); }};
}

template <class Access>
Key string_key(std::string sec, std::string name, Access acc) {
  return {sec, name,
          [acc](const std::string& v, RunConfig& c) -> std::string {
            acc(c) = v;
            return {};
          },
          [acc](const RunConfig& c) { return acc(c); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      int_key<int>("grid", "dim", [](auto& c) -> auto& { return c.grid.dim; }),
      int_key<int>("grid", "n", [](auto& c) -> auto& { return c.grid.n; }),
      real_key("grid", "length", [](auto& c) -> auto& { return c.grid.length; }),

      real_key("physics", "mu", [](auto& c) -> auto& { return c.physics.mu; }),
      real_key("physics", "lambda", [](auto& c) -> auto& { return c.physics.lambda; }),
      real_key("physics", "pressure_a", [](auto& c) -> auto& { return c.physics.law.a; }),
      real_key("physics", "pressure_gamma", [](auto& c) -> auto& { return c.physics.law.gamma; }),

      string_key("initial", "preset", [](auto& c) -> auto& { return c.initial.preset; }),
      real_key("initial", "amplitude", [](auto& c) -> auto& { return c.initial.amplitude; }),
      int_key<int>("initial", "wavenumber", [](auto& c) -> auto& { return c.initial.wavenumber; }),
      real_key("initial", "velocity", [](auto& c) -> auto& { return c.initial.velocity; }),
      string_key("initial", "rho_file", [](auto& c) -> auto& { return c.initial.rho_file; }),
      string_key("initial", "u_file", [](auto& c) -> auto& { return c.initial.u_file; }),
      string_key("initial", "F_file", [](auto& c) -> auto& { return c.initial.F_file; }),

      real_key("stepping", "dt", [](auto& c) -> auto& { return c.stepping.step.dt; }),
      real_key("stepping", "t_final", [](auto& c) -> auto& { return c.stepping.t_final; }),
      real_key("stepping", "dt_min", [](auto& c) -> auto& { return c.stepping.step.dt_min; }),
      real_key("stepping", "picard_tol", [](auto& c) -> auto& { return c.stepping.step.picard_tol; }),
      int_key<int>("stepping", "max_picard", [](auto& c) -> auto& { return c.stepping.step.max_picard; }),
      real_key("stepping", "relaxation", [](auto& c) -> auto& { return c.stepping.step.relaxation; }),
      real_key("stepping", "lame_tol", [](auto& c) -> auto& { return c.stepping.step.lame_tol; }),
      int_key<int>("stepping", "lame_max_iter", [](auto& c) -> auto& { return c.stepping.step.lame_max_iter; }),
      Key{"stepping", "preconditioner",
          [](const std::string& v, RunConfig& c) -> std::string {
            try {
              c.stepping.step.preconditioner = parse_preconditioner(v);
            } catch (const Error& e) {
              return e.what();
            }
            return {};
          },
          [](const RunConfig& c) { return to_string(c.stepping.step.preconditioner); }},
      real_key("stepping", "ball_radius_guard",
               [](auto& c) -> auto& { return c.stepping.step.ball_radius_guard; }),
      int_key<int>("stepping", "max_halvings", [](auto& c) -> auto& { return c.stepping.step.max_halvings; }),
      bool_key("stepping", "monotone_density",
               [](auto& c) -> auto& { return c.stepping.step.transport.monotone_density; }),
      bool_key("stepping", "full_exponential",
               [](auto& c) -> auto& { return c.stepping.step.transport.full_exponential; }),

      bool_key("monitors", "enabled", [](auto& c) -> auto& { return c.monitors.enabled; }),
      real_key("monitors", "q", [](auto& c) -> auto& { return c.monitors.monitor.q; }),
      real_key("monitors", "curl_allowance", [](auto& c) -> auto& { return c.monitors.monitor.curl_allowance; }),
      real_key("monitors", "envelope_allowance",
               [](auto& c) -> auto& { return c.monitors.monitor.envelope_allowance; }),
      bool_key("monitors", "fatal", [](auto& c) -> auto& { return c.monitors.monitor.fatal; }),

      string_key("output", "directory", [](auto& c) -> auto& { return c.output.directory; }),
      string_key("output", "monitor_csv", [](auto& c) -> auto& { return c.output.monitor_csv; }),
      int_key<int>("output", "snapshot_every", [](auto& c) -> auto& { return c.output.snapshot_every; }),

      int_key<int>("run", "threads", [](auto& c) -> auto& { return c.threads; }),
      int_key<std::uint64_t>("run", "seed", [](auto& c) -> auto& { return c.seed; }),
  };
  return k;
}

const std::set<std::string> kPresets = {"equilibrium", "acoustic", "compatible-deformation", "incompatible",
                                        "random-smooth", "file"};

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> errors)
    : ConfigError(join(errors)), errors_(std::move(errors)) {}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> e;
  auto num = [](double x) { return format_double(x); };
  if (c.grid.dim != 2 && c.grid.dim != 3) e.push_back("grid.dim = " + std::to_string(c.grid.dim) + " must be 2 or 3");
  if (c.grid.n < 8 || !is_power_of_two(c.grid.n)) {
    e.push_back("grid.n = " + std::to_string(c.grid.n) + " must be a power of two >= 8");
  }
  if (!(c.grid.length > 0.0)) e.push_back("grid.length = " + num(c.grid.length) + " violates length > 0");

  const double mu = c.physics.mu, lam = c.physics.lambda;
  if (!(mu > 0.0)) e.push_back("physics.mu = " + num(mu) + " violates μ > 0");
  if (!(3.0 * mu + 2.0 * lam > 0.0)) {
    e.push_back("physics: 3μ+2λ = " + num(3.0 * mu + 2.0 * lam) + " violates 3μ+2λ > 0");
  }
  if (!(c.physics.law.a > 0.0)) e.push_back("physics.pressure_a = " + num(c.physics.law.a) + " violates a > 0");
  if (!(c.physics.law.gamma >= 1.0)) {
    e.push_back("physics.pressure_gamma = " + num(c.physics.law.gamma) + " violates γ >= 1");
  }

  const auto& in = c.initial;
  if (!kPresets.count(in.preset)) e.push_back("initial.preset '" + in.preset + "' is not a known preset");
  if (in.wavenumber < 1) e.push_back("initial.wavenumber must be >= 1");
  if (in.preset == "acoustic" && !(std::abs(in.amplitude) < 1.0)) {
    e.push_back("initial.amplitude = " + num(in.amplitude) + " violates |amplitude| < 1 for the acoustic preset");
  }
  if (in.preset == "incompatible" && !(std::abs(in.amplitude) < 1.0)) {
    e.push_back("initial.amplitude = " + num(in.amplitude) +
                " violates |amplitude| < 1 for the incompatible preset");
  }
  if (in.preset == "file" && (in.rho_file.empty() || in.u_file.empty() || in.F_file.empty())) {
    e.push_back("initial: preset 'file' needs rho_file, u_file and F_file");
  }

  const auto& s = c.stepping.step;
  if (!(s.dt > 0.0)) e.push_back("stepping.dt = " + num(s.dt) + " violates dt > 0");
  if (!(s.dt_min > 0.0 && s.dt_min <= s.dt)) e.push_back("stepping.dt_min = " + num(s.dt_min) + " violates 0 < dt_min <= dt");
  if (!(c.stepping.t_final > 0.0)) e.push_back("stepping.t_final = " + num(c.stepping.t_final) + " violates t_final > 0");
  if (!(s.picard_tol > 0.0)) e.push_back("stepping.picard_tol violates picard_tol > 0");
  if (s.max_picard < 1) e.push_back("stepping.max_picard violates max_picard >= 1");
  if (!(s.relaxation > 0.0 && s.relaxation <= 1.0)) e.push_back("stepping.relaxation violates 0 < relaxation <= 1");
  if (!(s.lame_tol > 0.0 && s.lame_tol < 1.0)) e.push_back("stepping.lame_tol violates 0 < lame_tol < 1");
  if (s.lame_max_iter < 1) e.push_back("stepping.lame_max_iter violates lame_max_iter >= 1");
  if (!(s.ball_radius_guard >= 0.0)) e.push_back("stepping.ball_radius_guard violates ball_radius_guard >= 0");
  if (s.max_halvings < 0) e.push_back("stepping.max_halvings violates max_halvings >= 0");

  const auto& m = c.monitors.monitor;
  if (!(m.q > 3.0 && m.q <= 6.0)) e.push_back("monitors.q = " + num(m.q) + " violates 3 < q <= 6");
  if (!(m.envelope_allowance >= 0.0)) e.push_back("monitors.envelope_allowance violates envelope_allowance >= 0");

  if (c.output.directory.empty()) e.push_back("output.directory must not be empty");
  if (c.output.monitor_csv.empty()) e.push_back("output.monitor_csv must not be empty");
  if (c.output.snapshot_every < 0) e.push_back("output.snapshot_every violates snapshot_every >= 0");
  if (c.threads < 0) e.push_back("run.threads violates threads >= 0");
  return e;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::vector<std::string> errors;
  std::set<std::string> sections, seen;
  for (const auto& k : keys()) sections.insert(k.section);

  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto where = "line " + std::to_string(lineno) + ": ";
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) errors.push_back(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      errors.push_back(where + "key '" + name + "' appears outside any [section]");
      continue;
    }
    if (!sections.count(section)) continue;  // already reported
    const Key* key = nullptr;
    for (const auto& k : keys())
      if (k.section == section && k.name == name) key = &k;
    const std::string full = section + "." + name;
    if (!key) {
      errors.push_back(where + "unknown key '" + full + "'");
      continue;
    }
    if (!seen.insert(full).second) {
      errors.push_back(where + "duplicate key '" + full + "'");
      continue;
    }
    const std::string err = key->set(value, c);
    if (!err.empty()) errors.push_back(where + full + ": " + err);
  }
  for (auto& e : validate_config(c)) errors.push_back(std::move(e));
  if (!errors.empty()) throw ConfigErrors(std::move(errors));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) os << '\n';
      section = k.section;
      os << '[' << section << "]\n";
    }
    os << k.name << " = " << k.get(c) << '\n';
  }
  return os.str();
}

}  // namespace viscoflow
