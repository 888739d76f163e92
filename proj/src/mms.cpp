#include "viscoflow/mms.hpp"

#include <cmath>
#include <sstream>

#include "viscoflow/field_io.hpp"
#include "viscoflow/norms.hpp"

namespace viscoflow {
namespace {

using Kind = TrigTerm::Kind;

struct Factor {
  double f, d, dd;
};

Factor factor(Kind kind, double k, double x) {
  switch (kind) {
    case Kind::kOne: return {1.0, 0.0, 0.0};
    case Kind::kSin: return {std::sin(k * x), k * std::cos(k * x), -k * k * std::sin(k * x)};
    case Kind::kCos: return {std::cos(k * x), -k * std::sin(k * x), -k * k * std::cos(k * x)};
  }
  return {1.0, 0.0, 0.0};
}

TrigTerm constant(double c) { return TrigTerm{c, Kind::kOne, 0.0, {Kind::kOne, Kind::kOne, Kind::kOne}, {0, 0, 0}}; }

TrigTerm term(double coef, Kind time, double omega, std::array<Kind, 3> space, std::array<int, 3> k) {
  return TrigTerm{coef, time, omega, space, k};
}

// a sin(x0 - c t) = a sin x0 cos ct - a cos x0 sin ct
std::vector<TrigTerm> wave_sin(double a, double c) {
  return {term(a, Kind::kCos, c, {Kind::kSin, Kind::kOne, Kind::kOne}, {1, 0, 0}),
          term(-a, Kind::kSin, c, {Kind::kCos, Kind::kOne, Kind::kOne}, {1, 0, 0})};
}

// a cos(x0 - c t) = a cos x0 cos ct + a sin x0 sin ct
std::vector<TrigTerm> wave_cos(double a, double c) {
  return {term(a, Kind::kCos, c, {Kind::kCos, Kind::kOne, Kind::kOne}, {1, 0, 0}),
          term(a, Kind::kSin, c, {Kind::kSin, Kind::kOne, Kind::kOne}, {1, 0, 0})};
}

TrigSum sum(std::vector<TrigTerm> a, std::vector<TrigTerm> b = {}) {
  a.insert(a.end(), b.begin(), b.end());
  return TrigSum{std::move(a)};
}

void identity_F(ManufacturedCase& c) {
  for (int i = 0; i < 3; ++i) c.F[static_cast<std::size_t>(i * 3 + i)] = sum({constant(1.0)});
}

}  // namespace

Jet TrigSum::evaluate(const Point& x, double t) const {
  Jet j;
  for (const auto& tt : terms) {
    const Factor tf = tt.time == Kind::kOne ? Factor{1.0, 0.0, 0.0} : factor(tt.time, tt.omega, t);
    std::array<Factor, 3> sf;
    for (int a = 0; a < 3; ++a) sf[a] = factor(tt.space[a], tt.k[a], x[a]);
    const double prod = sf[0].f * sf[1].f * sf[2].f;
    j.value += tt.coef * tf.f * prod;
    j.dt += tt.coef * tf.d * prod;
    for (int a = 0; a < 3; ++a) {
      double g = tt.coef * tf.f * sf[a].d;
      for (int b = 0; b < 3; ++b)
        if (b != a) g *= sf[b].f;
      j.grad[a] += g;
      for (int b = 0; b < 3; ++b) {
        double h = tt.coef * tf.f;
        if (a == b) {
          h *= sf[a].dd;
          for (int c = 0; c < 3; ++c)
            if (c != a) h *= sf[c].f;
        } else {
          h *= sf[a].d * sf[b].d;
          for (int c = 0; c < 3; ++c)
            if (c != a && c != b) h *= sf[c].f;
        }
        j.hess[a][b] += h;
      }
    }
  }
  return j;
}

ManufacturedCase manufactured_case(const std::string& name) {
  ManufacturedCase c;
  c.name = name;
  if (name == "equilibrium") {
    c.rho = sum({constant(1.0)});
    identity_F(c);
    c.physics = Physics{1.0, 0.0, PressureLaw{1.0, 1.4}};
    c.t_final = 0.1;
    return c;
  }
  if (name == "traveling-wave") {
    // Plane acoustic-elastic wave in x0 with speed 1.
    constexpr double kSpeed = 1.0;
    c.rho = sum({constant(1.0)}, wave_sin(0.2, kSpeed));
    c.u[0] = sum(wave_sin(0.1, kSpeed));
    c.u[1] = sum(wave_cos(0.05, kSpeed));
    identity_F(c);
    c.F[0] = sum({constant(1.0)}, wave_sin(0.1, kSpeed));
    c.F[3] = sum(wave_cos(0.05, kSpeed));
    c.physics = Physics{0.1, 0.05, PressureLaw{1.0, 1.4}};
    c.t_final = 0.5;
    return c;
  }
  if (name == "rotating-deformation") {
    // Cellular rotation in the (x0, x1) plane with oscillating amplitude.
    c.rho = sum({constant(1.0), term(0.2, Kind::kCos, 1.0, {Kind::kSin, Kind::kSin, Kind::kOne}, {1, 1, 0})});
    c.u[0] = sum({term(0.2, Kind::kCos, 1.0, {Kind::kSin, Kind::kCos, Kind::kOne}, {1, 1, 0})});
    c.u[1] = sum({term(-0.2, Kind::kCos, 1.0, {Kind::kCos, Kind::kSin, Kind::kOne}, {1, 1, 0})});
    identity_F(c);
    c.F[0] = sum({constant(1.0), term(0.1, Kind::kCos, 1.0, {Kind::kSin, Kind::kCos, Kind::kOne}, {1, 1, 0})});
    c.F[1] = sum({term(0.1, Kind::kSin, 1.0, {Kind::kCos, Kind::kCos, Kind::kOne}, {1, 1, 0})});
    c.F[3] = sum({term(-0.1, Kind::kSin, 1.0, {Kind::kSin, Kind::kSin, Kind::kOne}, {1, 1, 0})});
    c.F[4] = sum({constant(1.0), term(0.1, Kind::kCos, 1.0, {Kind::kCos, Kind::kSin, Kind::kOne}, {1, 1, 0})});
    c.physics = Physics{0.1, 0.05, PressureLaw{1.0, 1.4}};
    c.t_final = 0.5;
    return c;
  }
  throw PreconditionError("unknown manufactured case '" + name + "'");
}

std::vector<std::string> manufactured_case_names() {
  return {"equilibrium", "traveling-wave", "rotating-deformation"};
}

PointSources manufactured_sources_at(const ManufacturedCase& c, int d, const Point& x, double t) {
  const Jet r = c.rho.evaluate(x, t);
  std::array<Jet, 3> u;
  std::array<Jet, 9> F;
  for (int i = 0; i < 3; ++i) u[static_cast<std::size_t>(i)] = c.u[static_cast<std::size_t>(i)].evaluate(x, t);
  for (int i = 0; i < 9; ++i) F[static_cast<std::size_t>(i)] = c.F[static_cast<std::size_t>(i)].evaluate(x, t);
  auto Fj = [&](int i, int j) -> const Jet& { return F[static_cast<std::size_t>(i * 3 + j)]; };
  auto uj = [&](int i) -> const Jet& { return u[static_cast<std::size_t>(i)]; };
  const double mu = c.physics.mu, lam = c.physics.lambda;

  PointSources s;
  // continuity: rho_t + div(rho u)
  s.rho = r.dt;
  for (int j = 0; j < d; ++j) s.rho += r.grad[j] * uj(j).value + r.value * uj(j).grad[j];

  // momentum
  for (int i = 0; i < d; ++i) {
    double g = r.value * uj(i).dt;
    for (int j = 0; j < d; ++j) g += r.value * uj(j).value * uj(i).grad[j];
    for (int j = 0; j < d; ++j) g -= mu * uj(i).hess[j][j];
    for (int j = 0; j < d; ++j) g -= (mu + lam) * uj(j).hess[i][j];
    g += c.physics.law.derivative(r.value) * r.grad[i];
    // div(rho F F^T)_i = d_j(rho F_ik F_jk)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        g -= r.grad[j] * Fj(i, k).value * Fj(j, k).value + r.value * Fj(i, k).grad[j] * Fj(j, k).value +
             r.value * Fj(i, k).value * Fj(j, k).grad[j];
      }
    s.u[static_cast<std::size_t>(i)] = g;
  }

  // deformation: F_t + u.grad F - grad u F
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double g = Fj(i, j).dt;
      for (int l = 0; l < d; ++l) g += uj(l).value * Fj(i, j).grad[l];
      for (int m = 0; m < d; ++m) g -= uj(i).grad[m] * Fj(m, j).value;
      s.F[static_cast<std::size_t>(i * 3 + j)] = g;
    }
  return s;
}

Sources manufactured_sources(const ManufacturedCase& c, const Grid& grid, double t) {
  const int d = grid.dim();
  Sources out{ScalarField(grid), VectorField(grid), TensorField(grid)};
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const PointSources ps = manufactured_sources_at(c, d, grid.node_position(n), t);
    out.rho[n] = ps.rho;
    for (int i = 0; i < d; ++i) {
      out.u.comp(i)[n] = ps.u[static_cast<std::size_t>(i)];
      for (int j = 0; j < d; ++j) out.F.comp(i, j)[n] = ps.F[static_cast<std::size_t>(i * 3 + j)];
    }
  }
  return out;
}

State exact_state(const ManufacturedCase& c, const Grid& grid, double t) {
  const int d = grid.dim();
  State s{t, ScalarField(grid), VectorField(grid), TensorField(grid)};
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Point x = grid.node_position(n);
    s.rho[n] = c.rho.evaluate(x, t).value;
    for (int i = 0; i < d; ++i) {
      s.u.comp(i)[n] = c.u[static_cast<std::size_t>(i)].evaluate(x, t).value;
      for (int j = 0; j < d; ++j) s.F.comp(i, j)[n] = c.F[static_cast<std::size_t>(i * 3 + j)].evaluate(x, t).value;
    }
  }
  return s;
}

std::string EocTable::to_csv() const {
  std::ostringstream os;
  os << "case,n,dt,steps,err_rho,err_u,err_F,eoc_rho,eoc_u,eoc_F\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    os << case_name << ',' << l.n << ',' << format_double(l.dt) << ',' << l.steps << ',' << format_double(l.err_rho)
       << ',' << format_double(l.err_u) << ',' << format_double(l.err_F);
    for (int k = 0; k < 3; ++k) {
      os << ',';
      if (i == 0) continue;
      if (exact[i - 1][static_cast<std::size_t>(k)]) os << "exact";
      else os << format_double(orders[i - 1][static_cast<std::size_t>(k)]);
    }
    os << '\n';
  }
  return os.str();
}

EocTable convergence_study(const ManufacturedCase& c, int dim, const std::vector<int>& grids,
                           const std::vector<double>& dts, const StepConfig& base) {
  if (grids.size() < 3 || grids.size() != dts.size()) {
    throw PreconditionError("convergence_study needs >= 3 levels with one dt per grid");
  }
  if (dim < c.min_dim) throw PreconditionError("case '" + c.name + "' needs dim >= " + std::to_string(c.min_dim));
  EocTable table;
  table.case_name = c.name;
  const ManufacturedForcing forcing(c);
  for (std::size_t lvl = 0; lvl < grids.size(); ++lvl) {
    const Grid grid(dim, grids[lvl]);
    StepConfig cfg = base;
    cfg.dt = dts[lvl];
    cfg.dt_min = std::min(cfg.dt_min, cfg.dt);
    const State init = exact_state(c, grid, 0.0);
    RunSummary run;
    try {
      run = run_simulation(init, c.t_final, cfg, c.physics, nullptr, {}, &forcing);
    } catch (const Error& e) {
      throw SolverDivergence(e.kind(), "convergence_study level " + std::to_string(lvl) + " (n=" +
                                           std::to_string(grids[lvl]) + "): " + e.what());
    }
    const State exact = exact_state(c, grid, run.final_state.t);
    ScalarField er = run.final_state.rho;
    er -= exact.rho;
    VectorField eu = run.final_state.u;
    eu -= exact.u;
    TensorField eF = run.final_state.F;
    eF -= exact.F;
    table.levels.push_back({grids[lvl], dts[lvl], run.steps, discrete_norm(er, NormKind::kL2),
                            discrete_norm(eu, NormKind::kL2), discrete_norm(eF, NormKind::kL2)});
  }
  for (std::size_t i = 1; i < table.levels.size(); ++i) {
    const auto& a = table.levels[i - 1];
    const auto& b = table.levels[i];
    const std::array<double, 3> ea{a.err_rho, a.err_u, a.err_F}, eb{b.err_rho, b.err_u, b.err_F};
    std::array<double, 3> ord{};
    std::array<bool, 3> ex{};
    const double hratio = static_cast<double>(b.n) / static_cast<double>(a.n);
    for (std::size_t k = 0; k < 3; ++k) {
      ex[k] = ea[k] <= kRoundoffError && eb[k] <= kRoundoffError;
      ord[k] = ex[k] ? 0.0 : std::log(ea[k] / eb[k]) / std::log(hratio);
    }
    table.orders.push_back(ord);
    table.exact.push_back(ex);
  }
  return table;
}

}  // namespace viscoflow
