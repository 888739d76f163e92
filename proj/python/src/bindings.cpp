#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "viscoflow/cli.hpp"
#include "viscoflow/config.hpp"
#include "viscoflow/constitutive.hpp"
#include "viscoflow/initial.hpp"
#include "viscoflow/mms.hpp"
#include "viscoflow/monitors.hpp"
#include "viscoflow/snapshot.hpp"
#include "viscoflow/stepper.hpp"

namespace py = pybind11;
using namespace viscoflow;

namespace {

// Arrays use C order over the grid axes, component axes first:
// rho (n0, n1[, n2]), u (d, n0, ...), F (d, d, n0, ...).
std::vector<py::ssize_t> grid_shape(const Grid& g) {
  std::vector<py::ssize_t> s;
  for (int a = 0; a < g.dim(); ++a) s.push_back(g.n(a));
  return s;
}

template <int Rank>
py::array_t<double> to_numpy(const Field<Rank>& f) {
  const Grid& g = f.grid();
  std::vector<py::ssize_t> shape;
  for (int r = 0; r < Rank; ++r) shape.push_back(g.dim());
  for (auto n : grid_shape(g)) shape.push_back(n);
  py::array_t<double> out(shape);
  double* p = out.mutable_data();
  for (int c = 0; c < f.components(); ++c) {
    const auto src = f.comp(c);
    std::copy(src.begin(), src.end(), p + static_cast<std::size_t>(c) * g.size());
  }
  return out;
}

template <int Rank>
Field<Rank> from_numpy(const Grid& g, const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  Field<Rank> f(g);
  const auto expected = static_cast<std::size_t>(f.components()) * g.size();
  if (static_cast<std::size_t>(a.size()) != expected)
    throw PreconditionError("array has " + std::to_string(a.size()) + " entries, expected " + std::to_string(expected));
  const double* p = a.data();
  for (int c = 0; c < f.components(); ++c)
    std::copy(p + static_cast<std::size_t>(c) * g.size(), p + static_cast<std::size_t>(c + 1) * g.size(),
              f.comp(c).begin());
  return f;
}

Matrix matrix_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1) || (a.shape(0) != 2 && a.shape(0) != 3))
    throw PreconditionError("expected a 2x2 or 3x3 matrix");
  Matrix m(static_cast<int>(a.shape(0)));
  std::copy(a.data(), a.data() + a.size(), m.a.begin());
  return m;
}

py::array_t<double> matrix_to(const Matrix& m) {
  py::array_t<double> out({m.dim, m.dim});
  std::copy(m.a.begin(), m.a.end(), out.mutable_data());
  return out;
}

py::dict report_dict(const MonitorReport& r) {
  py::dict d;
  d["t"] = r.t;
  d["mass"] = r.mass;
  d["curl_defect_max"] = r.curl_defect_max;
  d["curl_bound"] = r.curl_bound;
  d["div_rhoFt_norm"] = r.div_rhoFt_norm;
  d["volume_defect"] = r.volume_defect ? py::cast(*r.volume_defect) : py::none();
  d["rho_min"] = r.rho_min;
  d["rho_max"] = r.rho_max;
  d["envelope_lo"] = r.envelope_lo;
  d["envelope_hi"] = r.envelope_hi;
  d["F_norm_q"] = r.F_norm_q;
  d["F_norm_q_bound"] = r.F_norm_q_bound;
  d["kinetic"] = r.kinetic;
  d["elastic"] = r.elastic;
  d["potential"] = r.potential;
  d["grad_u_L2"] = r.grad_u_L2;
  d["picard_iters"] = r.picard_iters;
  d["lame_iters"] = r.lame_iters;
  d["dt"] = r.dt;
  d["lame_residual"] = r.lame_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_viscoflow, m) {
  m.doc() = "Compressible viscoelastic flow solver on periodic grids";

  static py::exception<Error> base(m, "ViscoflowError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(base.ptr())(e.what());
      exc.attr("code") = static_cast<int>(e.code());
      exc.attr("kind") = e.kind();
      PyErr_SetObject(base.ptr(), exc.ptr());
    }
  });

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int, double>(), py::arg("dim"), py::arg("n"), py::arg("length") = Grid::kDefaultLength)
      .def_property_readonly("dim", &Grid::dim)
      .def_property_readonly("shape", [](const Grid& g) { return grid_shape(g); })
      .def_property_readonly("spacing", [](const Grid& g) {
        std::vector<double> h;
        for (int a = 0; a < g.dim(); ++a) h.push_back(g.h(a));
        return h;
      })
      .def_property_readonly("size", &Grid::size)
      .def_property_readonly("volume", &Grid::volume)
      .def("__repr__", [](const Grid& g) {
        std::ostringstream os;
        os << "Grid(dim=" << g.dim() << ", n=" << g.n(0) << ")";
        return os.str();
      });

  py::class_<Physics>(m, "Physics")
      .def(py::init([](double mu, double lambda, double a, double gamma) {
             Physics p{mu, lambda, PressureLaw{a, gamma}};
             p.validate();
             return p;
           }),
           py::arg("mu") = 1.0, py::arg("lam") = 0.0, py::arg("a") = 1.0, py::arg("gamma") = 1.4)
      .def_readonly("mu", &Physics::mu)
      .def_readonly("lam", &Physics::lambda)
      .def_property_readonly("a", [](const Physics& p) { return p.law.a; })
      .def_property_readonly("gamma", [](const Physics& p) { return p.law.gamma; });

  py::class_<State>(m, "State")
      .def(py::init([](const Grid& g, const py::array_t<double>& rho, const py::array_t<double>& u,
                       const py::array_t<double>& F, double t) {
             State s{t, from_numpy<0>(g, rho), from_numpy<1>(g, u), from_numpy<2>(g, F)};
             s.validate();
             return s;
           }),
           py::arg("grid"), py::arg("rho"), py::arg("u"), py::arg("F"), py::arg("t") = 0.0)
      .def_readwrite("t", &State::t)
      .def_property_readonly("grid", [](const State& s) { return s.grid(); })
      .def_property("rho", [](const State& s) { return to_numpy(s.rho); },
                    [](State& s, const py::array_t<double>& a) { s.rho = from_numpy<0>(s.grid(), a); })
      .def_property("u", [](const State& s) { return to_numpy(s.u); },
                    [](State& s, const py::array_t<double>& a) { s.u = from_numpy<1>(s.grid(), a); })
      .def_property("F", [](const State& s) { return to_numpy(s.F); },
                    [](State& s, const py::array_t<double>& a) { s.F = from_numpy<2>(s.grid(), a); })
      .def("__eq__", [](const State& a, const State& b) { return a == b; });

  m.def("equilibrium_state", &equilibrium_state, py::arg("grid"));
  m.def("acoustic_state", &acoustic_state, py::arg("grid"), py::arg("amplitude"), py::arg("k") = 1);
  m.def("compatible_deformation_state", &compatible_deformation_state, py::arg("grid"), py::arg("amplitude"),
        py::arg("k") = 1);
  m.def("incompatible_state", &incompatible_state, py::arg("grid"), py::arg("amplitude"), py::arg("k") = 1);
  m.def("random_smooth_state", &random_smooth_state, py::arg("grid"), py::arg("amplitude"), py::arg("seed") = 1);
  m.def(
      "add_cell_flow",
      [](State s, double velocity, int k) {
        add_cell_flow(s, velocity, k);
        return s;
      },
      py::arg("state"), py::arg("velocity"), py::arg("k") = 1, "Returns a copy with the cell flow added.");

  m.def(
      "simulate",
      [](const State& initial, double t_final, const Physics& phys, double dt, double picard_tol, int max_picard,
         double lame_tol, const std::string& preconditioner, bool monitors, bool full_exponential,
         bool monotone_density) {
        StepConfig cfg;
        cfg.dt = dt;
        cfg.picard_tol = picard_tol;
        cfg.max_picard = max_picard;
        cfg.lame_tol = lame_tol;
        cfg.preconditioner = parse_preconditioner(preconditioner);
        cfg.transport.full_exponential = full_exponential;
        cfg.transport.monotone_density = monotone_density;
        cfg.validate();
        std::optional<MonitorSuite> mon;
        if (monitors) mon.emplace(initial, phys);
        RunSummary sum;
        {
          py::gil_scoped_release nogil;
          sum = run_simulation(initial, t_final, cfg, phys, mon ? &*mon : nullptr);
        }
        py::dict out;
        out["state"] = sum.final_state;
        out["steps"] = sum.steps;
        out["rejected_attempts"] = sum.rejected_attempts;
        out["picard_iterations"] = sum.total_picard_iterations;
        out["lame_iterations"] = sum.total_lame_iterations;
        out["smallest_dt"] = sum.smallest_dt;
        py::list reports;
        if (mon)
          for (const auto& r : mon->reports()) reports.append(report_dict(r));
        out["reports"] = reports;
        out["monitors_passed"] = mon ? mon->all_passed() : true;
        return out;
      },
      py::arg("state"), py::arg("t_final"), py::arg("physics") = Physics{}, py::arg("dt") = 1e-2,
      py::arg("picard_tol") = 1e-8, py::arg("max_picard") = 50, py::arg("lame_tol") = 1e-10,
      py::arg("preconditioner") = "fft", py::arg("monitors") = true, py::arg("full_exponential") = false,
      py::arg("monotone_density") = true);

  m.def(
      "report", [](const State& s, const Physics& phys, double q) { return report_dict(MonitorSuite::snapshot_report(s, phys, q)); },
      py::arg("state"), py::arg("physics") = Physics{}, py::arg("q") = 4.0);
  m.def("curl_defect", [](const State& s) { return curl_defect(s.F).max; }, py::arg("state"));
  m.def("elastic_compatibility_divergence", [](const State& s) { return elastic_compatibility_divergence(s.rho, s.F); },
        py::arg("state"));

  m.def("piola_stress", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& f) {
    return matrix_to(piola_stress(matrix_from(f), EnergyDensity{}));
  });
  m.def("piola_stress_numeric", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& f) {
    return matrix_to(piola_stress_numeric(matrix_from(f), EnergyDensity{}));
  });

  m.def("manufactured_cases", &manufactured_case_names);
  m.def("exact_state", [](const std::string& name, const Grid& g, double t) { return exact_state(manufactured_case(name), g, t); },
        py::arg("case"), py::arg("grid"), py::arg("t"));
  m.def(
      "convergence_study",
      [](const std::string& name, int dim, const std::vector<int>& grids, const std::vector<double>& dts) {
        StepConfig base;
        base.picard_tol = 1e-10;
        base.lame_tol = 1e-12;
        EocTable t;
        {
          py::gil_scoped_release nogil;
          t = convergence_study(manufactured_case(name), dim, grids, dts, base);
        }
        py::list levels;
        for (const auto& l : t.levels) {
          py::dict d;
          d["n"] = l.n;
          d["dt"] = l.dt;
          d["steps"] = l.steps;
          d["err_rho"] = l.err_rho;
          d["err_u"] = l.err_u;
          d["err_F"] = l.err_F;
          levels.append(d);
        }
        py::dict out;
        out["levels"] = levels;
        out["orders"] = t.orders;
        out["exact"] = t.exact;
        out["csv"] = t.to_csv();
        return out;
      },
      py::arg("case"), py::arg("dim"), py::arg("grids"), py::arg("dts"));

  m.def("parse_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "Validates configuration text and returns its canonical form.");
  m.def("initial_state", [](const std::string& text) { return initial_state(parse_config(text)); }, py::arg("text"));

  m.def("read_snapshot", [](const std::filesystem::path& dir) { return read_snapshot(dir); }, py::arg("directory"));
  m.def(
      "write_snapshot",
      [](const State& s, const std::filesystem::path& dir, int index) { return write_snapshot(s, dir, index).directory; },
      py::arg("state"), py::arg("directory"), py::arg("index"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release nogil;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a subcommand; returns (exit_code, stdout, stderr).");
}
