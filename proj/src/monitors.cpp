#include "viscoflow/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "viscoflow/field_io.hpp"
#include "viscoflow/interpolation.hpp"
#include "viscoflow/norms.hpp"
#include "viscoflow/operators.hpp"
#include "viscoflow/parallel.hpp"

namespace viscoflow {
namespace {

// d_l F_c for every tensor component c, indexed [c][l].
std::vector<VectorField> tensor_gradients(const TensorField& F) {
  std::vector<VectorField> out;
  out.reserve(static_cast<std::size_t>(F.components()));
  for (int c = 0; c < F.components(); ++c) {
    VectorField g(F.grid());
    for (int l = 0; l < F.dim(); ++l) accumulate_first_derivative(F.grid(), l, F.comp(c), g.comp(l));
    out.push_back(std::move(g));
  }
  return out;
}

double h1_norm(const TensorField& F) {
  const auto grads = tensor_gradients(F);
  double g2 = 0.0;
  for (const auto& g : grads) {
    const double n = discrete_norm(g, NormKind::kL2);
    g2 += n * n;
  }
  return discrete_norm(F, NormKind::kL2) + std::sqrt(g2);
}

double trapezoid(std::span<const double> t, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size() && i < y.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace

CurlDefect curl_defect(const TensorField& F) {
  require_finite(F, "curl_defect");
  const int d = F.dim();
  const auto dF = tensor_gradients(F);
  CurlDefect out{ScalarField(F.grid()), 0.0};
  parallel_for(F.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n) {
      double m = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            double x = 0.0;
            for (int l = 0; l < d; ++l) {
              x += F.comp(l, k)[n] * dF[static_cast<std::size_t>(i * d + j)].comp(l)[n] -
                   F.comp(l, j)[n] * dF[static_cast<std::size_t>(i * d + k)].comp(l)[n];
            }
            m = std::max(m, std::abs(x));
          }
      out.field[n] = m;
    }
  });
  for (double x : out.field.comp(0)) out.max = std::max(out.max, x);
  return out;
}

BoundCheck curl_growth_check(std::span<const double> times, std::span<const double> grad_u_inf, double M0,
                             double Mt, double allowance) {
  for (double g : grad_u_inf)
    if (g < 0.0) throw PreconditionError("curl_growth_check: negative gradient history");
  const double bound = M0 * std::exp(2.0 * trapezoid(times, grad_u_inf));
  BoundCheck c{"curl_growth", true, Mt, bound, bound + allowance - Mt};
  c.passed = c.slack >= 0.0;
  return c;
}

double elastic_compatibility_divergence(const ScalarField& rho, const TensorField& F) {
  require_same_grid(rho, F, "elastic_compatibility_divergence");
  const int d = F.dim();
  TensorField rft(F.grid());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto o = rft.comp(i, j);
      const auto f = F.comp(j, i);
      for (std::size_t n = 0; n < F.size(); ++n) o[n] = rho[n] * f[n];
    }
  return discrete_norm(apply_tensor_divergence(rft), NormKind::kL2);
}

std::optional<double> material_volume_defect(const State& s, const State& s0, const VectorField* displacement) {
  if (!displacement) return std::nullopt;
  const Grid& g = s.grid();
  const ScalarField det = determinant_field(s.F);
  const ScalarField det0 = determinant_field(s0.F);
  ScalarField q0(g);
  for (std::size_t n = 0; n < g.size(); ++n) q0[n] = s0.rho[n] * det0[n];
  double m = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    Point x = g.node_position(n);
    for (int a = 0; a < g.dim(); ++a) x[a] += displacement->comp(a)[n];
    const CubicStencil st(g, x);
    m = std::max(m, std::abs(s.rho[n] * det[n] - st.apply(q0.comp(0))));
  }
  return m;
}

std::vector<BoundCheck> envelope_and_norm_checks(const State& s, const BoundAccumulators& acc) {
  double rmin = s.rho[0], rmax = s.rho[0];
  for (double r : s.rho.comp(0)) {
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  std::vector<BoundCheck> out;
  BoundCheck lo{"density_envelope_lo", true, rmin, acc.envelope_lo, rmin - (acc.envelope_lo - acc.envelope_allowance)};
  lo.passed = lo.slack >= 0.0;
  BoundCheck hi{"density_envelope_hi", true, rmax, acc.envelope_hi, acc.envelope_hi + acc.envelope_allowance - rmax};
  hi.passed = hi.slack >= 0.0;
  const double fq = discrete_norm(s.F, NormKind::kLq, acc.q);
  const double fbound = (acc.F0_norm + acc.int_v_w2q) * std::exp(acc.int_v_w2q);
  BoundCheck fn{"deformation_norm", true, fq, fbound, fbound - fq};
  fn.passed = fn.slack >= 0.0;
  out.push_back(lo);
  out.push_back(hi);
  out.push_back(fn);
  return out;
}

EnergyReport energy_report(const State& s, const PressureLaw& law) {
  const Grid& g = s.grid();
  ScalarField ke(g), el(g), pot(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    double u2 = 0.0, f2 = 0.0;
    for (int c = 0; c < s.u.components(); ++c) u2 += s.u.comp(c)[n] * s.u.comp(c)[n];
    for (int c = 0; c < s.F.components(); ++c) f2 += s.F.comp(c)[n] * s.F.comp(c)[n];
    ke[n] = 0.5 * s.rho[n] * u2;
    el[n] = 0.5 * s.rho[n] * f2;
    pot[n] = law.potential(s.rho[n]);
  }
  return {integrate(ke), integrate(el), discrete_norm(apply_gradient(s.u), NormKind::kL2), integrate(pot)};
}

double w2q_norm(const VectorField& v, double q) {
  const TensorField gv = apply_gradient(v);
  const auto hess = tensor_gradients(gv);
  ScalarField hmag(v.grid());
  for (const auto& h : hess)
    for (int l = 0; l < v.dim(); ++l)
      for (std::size_t n = 0; n < v.size(); ++n) hmag[n] += h.comp(l)[n] * h.comp(l)[n];
  for (auto& x : hmag.comp(0)) x = std::sqrt(x);
  return discrete_norm(v, NormKind::kLq, q) + discrete_norm(gv, NormKind::kLq, q) +
         discrete_norm(hmag, NormKind::kLq, q);
}

double grad_inf_norm(const VectorField& u) { return discrete_norm(apply_gradient(u), NormKind::kLinf); }

// ---------------------------------------------------------------------------

MonitorSuite::MonitorSuite(const State& initial, const Physics& phys, MonitorConfig cfg)
    : phys_(phys), cfg_(cfg), initial_(initial), displacement_(initial.grid()) {
  initial_.validate();
  const Grid& g = initial.grid();
  const ScalarField det0 = determinant_field(initial.F);
  material0_ = ScalarField(g);
  for (std::size_t n = 0; n < g.size(); ++n) material0_[n] = initial.rho[n] * det0[n];

  curl0_ = curl_defect(initial.F).max;
  double hmax = 0.0;
  for (int a = 0; a < g.dim(); ++a) hmax = std::max(hmax, g.h(a));
  curl_allowance_ = cfg.curl_allowance < 0.0 ? 10.0 * hmax * hmax : cfg.curl_allowance;

  times_.push_back(initial.t);
  grad_inf_.push_back(grad_inf_norm(initial.u));
  last_w2q_ = w2q_norm(initial.u, cfg.q);

  acc_.alpha = *std::min_element(initial.rho.comp(0).begin(), initial.rho.comp(0).end());
  acc_.beta = *std::max_element(initial.rho.comp(0).begin(), initial.rho.comp(0).end());
  acc_.envelope_lo = acc_.alpha;
  acc_.envelope_hi = acc_.beta;
  acc_.F0_norm = discrete_norm(initial.F, NormKind::kW1q, cfg.q) + h1_norm(initial.F);
  acc_.q = cfg.q;
  acc_.envelope_allowance = cfg.envelope_allowance;

  reports_.push_back(build_report(initial));
  last_checks_ = envelope_and_norm_checks(initial, acc_);
  last_checks_.push_back(curl_growth_check(times_, grad_inf_, curl0_, reports_.back().curl_defect_max,
                                           curl_allowance_));
  for (const auto& c : last_checks_) all_passed_ = all_passed_ && c.passed;
}

MonitorReport MonitorSuite::build_report(const State& s) const {
  MonitorReport r;
  r.t = s.t;
  r.mass = integrate(s.rho);
  r.curl_defect_max = curl_defect(s.F).max;
  r.curl_bound = curl0_ * std::exp(2.0 * trapezoid(times_, grad_inf_));
  r.div_rhoFt_norm = elastic_compatibility_divergence(s.rho, s.F);
  if (feet_valid_) r.volume_defect = material_volume_defect(s, initial_, &displacement_);
  r.rho_min = *std::min_element(s.rho.comp(0).begin(), s.rho.comp(0).end());
  r.rho_max = *std::max_element(s.rho.comp(0).begin(), s.rho.comp(0).end());
  r.envelope_lo = acc_.envelope_lo;
  r.envelope_hi = acc_.envelope_hi;
  r.F_norm_q = discrete_norm(s.F, NormKind::kLq, cfg_.q);
  r.F_norm_q_bound = (acc_.F0_norm + acc_.int_v_w2q) * std::exp(acc_.int_v_w2q);
  const EnergyReport e = energy_report(s, phys_.law);
  r.kinetic = e.kinetic;
  r.elastic = e.elastic;
  r.grad_u_L2 = e.grad_u_L2;
  r.potential = e.potential;
  return r;
}

const MonitorReport& MonitorSuite::record_step(const State& s, const DeparturePoints* dp, double dt,
                                               int picard_iters, int lame_iters, double lame_residual) {
  const Grid& g = s.grid();
  if (dp && feet_valid_) {
    VectorField next(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
      const Point foot = dp->foot(n);
      const CubicStencil st(g, foot);
      const Point x = g.node_position(n);
      for (int a = 0; a < g.dim(); ++a)
        next.comp(a)[n] = (foot[a] - x[a]) + st.apply(displacement_.comp(a));
    }
    displacement_ = std::move(next);
  } else {
    feet_valid_ = false;
  }

  if (dp) {
    // Same factor per step as advect_density applies at its extreme node.
    const double m = dp->max_abs_divergence();
    acc_.envelope_lo *= std::exp(-(dp->dt * m));
    acc_.envelope_hi *= std::exp(dp->dt * m);
    acc_.int_div_inf += dp->dt * m;
  } else {
    const double m0 = discrete_norm(apply_divergence(s.u), NormKind::kLinf);
    acc_.envelope_lo *= std::exp(-(dt * m0));
    acc_.envelope_hi *= std::exp(dt * m0);
    acc_.int_div_inf += dt * m0;
  }

  const double w2q = w2q_norm(s.u, cfg_.q);
  acc_.int_v_w2q += 0.5 * dt * (last_w2q_ + w2q);
  last_w2q_ = w2q;
  times_.push_back(s.t);
  grad_inf_.push_back(grad_inf_norm(s.u));

  MonitorReport r = build_report(s);
  r.picard_iters = picard_iters;
  r.lame_iters = lame_iters;
  r.dt = dt;
  r.lame_residual = lame_residual;
  reports_.push_back(r);

  last_checks_ = envelope_and_norm_checks(s, acc_);
  last_checks_.push_back(curl_growth_check(times_, grad_inf_, curl0_, r.curl_defect_max, curl_allowance_));
  bool ok = true;
  for (const auto& c : last_checks_) ok = ok && c.passed;
  all_passed_ = all_passed_ && ok;
  if (cfg_.fatal && !ok) {
    std::string names;
    for (const auto& c : last_checks_)
      if (!c.passed) names += (names.empty() ? "" : ",") + c.name;
    throw InvariantFailure("monitor bound violated at t=" + format_double(s.t) + ": " + names);
  }
  return reports_.back();
}

MonitorReport MonitorSuite::snapshot_report(const State& s, const Physics& phys, double q) {
  MonitorConfig cfg;
  cfg.q = q;
  MonitorSuite suite(s, phys, cfg);
  MonitorReport r = suite.initial_report();
  r.volume_defect = 0.0;
  return r;
}

std::string monitor_csv_header() {
  return "t,mass,curl_defect_max,curl_bound,div_rhoFt_norm,volume_defect,rho_min,rho_max,envelope_lo,"
         "envelope_hi,F_norm_q,F_norm_q_bound,kinetic,elastic,grad_u_L2,picard_iters,lame_iters,potential,dt,"
         "lame_residual";
}

std::string monitor_csv_row(const MonitorReport& r) {
  std::ostringstream os;
  auto f = [&](double x) { os << format_double(x) << ','; };
  f(r.t);
  f(r.mass);
  f(r.curl_defect_max);
  f(r.curl_bound);
  f(r.div_rhoFt_norm);
  os << (r.volume_defect ? format_double(*r.volume_defect) : std::string("skipped")) << ',';
  f(r.rho_min);
  f(r.rho_max);
  f(r.envelope_lo);
  f(r.envelope_hi);
  f(r.F_norm_q);
  f(r.F_norm_q_bound);
  f(r.kinetic);
  f(r.elastic);
  f(r.grad_u_L2);
  os << r.picard_iters << ',' << r.lame_iters << ',';
  f(r.potential);
  f(r.dt);
  os << format_double(r.lame_residual);
  return os.str();
}

MonitorCsvWriter::MonitorCsvWriter(const std::filesystem::path& path)
    : path_(path), os_(path, std::ios::trunc) {
  if (!os_) throw IoError("cannot open monitor CSV '" + path.string() + "'");
  os_ << monitor_csv_header() << '\n' << std::flush;
}

void MonitorCsvWriter::write(const MonitorReport& r) {
  os_ << monitor_csv_row(r) << '\n' << std::flush;
  if (!os_) throw IoError("failed writing monitor CSV '" + path_.string() + "'");
}

}  // namespace viscoflow
