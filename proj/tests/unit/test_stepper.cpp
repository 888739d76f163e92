#include <doctest.h>

#include "test_support.hpp"
#include "viscoflow/initial.hpp"
#include "viscoflow/norms.hpp"
#include "viscoflow/operators.hpp"
#include "viscoflow/stepper.hpp"

using namespace viscoflow;

namespace {

std::vector<double> d_axis(const Grid& g, std::span<const double> f, int axis) {
  std::vector<double> out(g.size());
  const double h = g.h(axis);
  for (std::size_t n = 0; n < g.size(); ++n) {
    auto m = g.multi_index(n);
    auto at = [&](int off) {
      auto q = m;
      q[static_cast<std::size_t>(axis)] += off;
      return f[g.index(q[0], q[1], q[2])];
    };
    out[n] = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
  }
  return out;
}

const Physics kPhys{0.1, 0.05, PressureLaw{1.0, 1.4}};

State perturbed(const Grid& g, std::uint64_t seed, double velocity) {
  State s = random_smooth_state(g, 0.1, seed);
  add_cell_flow(s, velocity, 1);
  return s;
}

ScalarField restrict2(const ScalarField& fine, const Grid& coarse) {
  ScalarField out(coarse);
  for (std::size_t n = 0; n < coarse.size(); ++n) {
    const auto m = coarse.multi_index(n);
    out[n] = fine[fine.grid().index(2 * m[0], 2 * m[1], 2 * m[2])];
  }
  return out;
}

class ZeroForcing : public Forcing {
 public:
  Sources evaluate(const Grid& g, double) const override { return {ScalarField(g), VectorField(g), TensorField(g)}; }
};

}  // namespace

TEST_CASE("momentum rhs vanishes exactly at equilibrium") {
  for (int d : {2, 3}) {
    const State s = equilibrium_state(Grid(d, 16));
    CHECK(vf_test::max_abs(assemble_momentum_rhs(s.rho, s.u, s.F, PressureLaw{2.0, 1.4})) == 0.0);
  }
}

TEST_CASE("isothermal pressure cancels the stress of F = I") {
  // -grad(a rho) + div(rho I) with a = 1
  for (int d : {2, 3}) {
    const Grid g(d, 16);
    const auto rho = vf_test::random_smooth_field<0>(g, 4, 0.5, 1.0);
    const auto r = assemble_momentum_rhs(rho, VectorField(g), identity_tensor(g), PressureLaw{1.0, 1.0});
    CHECK(vf_test::max_abs(r) <= 1e-13);
  }
}

TEST_CASE("momentum rhs against brute-force reassembly") {
  for (int d : {2, 3}) {
    const Grid g(d, 16);
    const auto rho = vf_test::random_smooth_field<0>(g, 1, 0.5, 1.0);
    const auto v = vf_test::random_smooth_field<1>(g, 2, 0.5);
    const auto F = vf_test::random_smooth_deformation(g, 3, 0.4);
    const PressureLaw law{1.3, 1.4};
    const auto r = assemble_momentum_rhs(rho, v, F, law);
    std::vector<double> P(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) P[n] = law.a * std::pow(rho[n], law.gamma);
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      std::vector<double> acc = d_axis(g, P, i);
      for (auto& x : acc) x = -x;
      for (int j = 0; j < d; ++j) {
        std::vector<double> T(g.size());
        for (std::size_t n = 0; n < g.size(); ++n) {
          double t = 0.0;
          for (int k = 0; k < d; ++k) t += F.comp(i, k)[n] * F.comp(j, k)[n];
          T[n] = rho[n] * t;
        }
        const auto dT = d_axis(g, T, j);
        const auto dv = d_axis(g, v.comp(i), j);
        for (std::size_t n = 0; n < g.size(); ++n) acc[n] += dT[n] - rho[n] * v.comp(j)[n] * dv[n];
      }
      for (std::size_t n = 0; n < g.size(); ++n) worst = std::max(worst, std::abs(acc[n] - r.comp(i)[n]));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("picard converges in one iteration at equilibrium") {
  const State s = equilibrium_state(Grid(2, 16));
  StepConfig cfg;
  cfg.dt = 0.1;
  const auto res = picard_step(s, cfg, kPhys);
  CHECK(res.trace.iterations == 1);
  CHECK(res.trace.converged);
  CHECK(res.state.rho == s.rho);
  CHECK(res.state.u == s.u);
  CHECK(res.state.F == s.F);
  CHECK(res.state.t == doctest::Approx(0.1));
}

TEST_CASE("equilibrium is preserved bit-exactly for 100 steps") {
  const State s = equilibrium_state(Grid(2, 16));
  StepConfig cfg;
  cfg.dt = 0.05;
  const auto sum = run_simulation(s, 5.0, cfg, kPhys);
  CHECK(sum.steps == 100);
  CHECK(sum.final_state.rho == s.rho);
  CHECK(sum.final_state.u == s.u);
  CHECK(sum.final_state.F == s.F);
  CHECK(sum.final_state.t == 5.0);
}

TEST_CASE("zero forcing changes nothing") {
  const State s = perturbed(Grid(2, 16), 3, 0.2);
  StepConfig cfg;
  cfg.dt = 0.05;
  const ZeroForcing zero;
  const auto a = picard_step(s, cfg, kPhys);
  const auto b = picard_step(s, cfg, kPhys, &zero);
  CHECK(a.state == b.state);
}

TEST_CASE("acoustic pulse self-converges at first order") {
  const double T = 0.4;
  std::vector<State> finals;
  for (int n : {16, 32, 64}) {
    const Grid g(2, n);
    StepConfig cfg;
    cfg.dt = 1.6 / n;
    finals.push_back(run_simulation(acoustic_state(g, 0.2, 1), T, cfg, kPhys).final_state);
  }
  const double e1 = vf_test::l2_diff(finals[0].rho, restrict2(finals[1].rho, finals[0].grid()));
  const double e2 = vf_test::l2_diff(finals[1].rho, restrict2(finals[2].rho, finals[1].grid()));
  MESSAGE("self-convergence ratio ", e1 / e2);
  CHECK(vf_test::eoc(e1, e2) >= 0.8);
  // mass drifts only through the transport error
  for (const auto& f : finals) CHECK(integrate(f.rho) == doctest::Approx(4 * vf_test::kPi * vf_test::kPi).epsilon(1e-2));
}

TEST_CASE("picard contraction improves as dt shrinks") {
  const State s = perturbed(Grid(2, 32), 5, 0.5);
  StepConfig cfg;
  cfg.picard_tol = 1e-12;
  double prev = 0.0;
  for (double dt : {0.1, 0.05, 0.025}) {
    cfg.dt = dt;
    const auto res = picard_step(s, cfg, kPhys);
    const double q = res.trace.decay_ratio();
    CHECK(q < 1.0);
    if (dt < 0.1) CHECK(q <= 0.75 * prev);
    prev = q;
  }
}

TEST_CASE("runs are deterministic bit for bit") {
  const State s = perturbed(Grid(2, 32), 9, 0.3);
  StepConfig cfg;
  cfg.dt = 0.05;
  const auto a = run_simulation(s, 0.5, cfg, kPhys);
  const auto b = run_simulation(s, 0.5, cfg, kPhys);
  CHECK(vf_test::hash_field(a.final_state.rho) == vf_test::hash_field(b.final_state.rho));
  CHECK(vf_test::hash_field(a.final_state.u) == vf_test::hash_field(b.final_state.u));
  CHECK(vf_test::hash_field(a.final_state.F) == vf_test::hash_field(b.final_state.F));
}

TEST_CASE("CFL failures halve dt and the run still reaches t_final") {
  State s = equilibrium_state(Grid(2, 16));
  add_cell_flow(s, 2.0, 1);
  StepConfig cfg;
  cfg.dt = 1.0;  // dt |u| = 2 > 2 pi / 4
  const auto sum = run_simulation(s, 1.5, cfg, kPhys);
  CHECK(sum.rejected_attempts >= 1);
  CHECK(sum.smallest_dt < 1.0);
  CHECK(sum.final_state.t == 1.5);
}

TEST_CASE("dt underflow is a divergence error") {
  const State s = perturbed(Grid(2, 16), 2, 0.3);
  StepConfig cfg;
  cfg.dt = 0.1;
  cfg.max_picard = 1;
  cfg.max_halvings = 2;
  try {
    run_simulation(s, 1.0, cfg, kPhys);
    FAIL("expected dt underflow");
  } catch (const SolverDivergence& e) {
    CHECK(e.kind() == std::string("dt_underflow"));
    CHECK(e.code() == ExitCode::kDivergence);
  }
  CHECK_THROWS_AS(picard_step(s, cfg, kPhys), PicardDivergence);
}

TEST_CASE("ball guard raises NormBlowup") {
  const State s = perturbed(Grid(2, 16), 2, 0.3);
  StepConfig cfg;
  cfg.dt = 0.1;
  cfg.ball_radius_guard = 1e-3;
  try {
    picard_step(s, cfg, kPhys);
    FAIL("expected NormBlowup");
  } catch (const NormBlowup& e) {
    CHECK(e.kind() == std::string("norm_blowup"));
  }
  cfg.ball_radius_guard = 1e6;
  CHECK_NOTHROW(picard_step(s, cfg, kPhys));
}

TEST_CASE("relaxed picard reaches the same fixed point") {
  const State s = perturbed(Grid(2, 16), 6, 0.3);
  StepConfig cfg;
  cfg.dt = 0.05;
  cfg.picard_tol = 1e-12;
  const auto a = picard_step(s, cfg, kPhys);
  cfg.relaxation = 0.7;
  cfg.max_picard = 200;
  const auto b = picard_step(s, cfg, kPhys);
  CHECK(b.trace.iterations > a.trace.iterations);
  CHECK(vf_test::max_abs_diff(a.state.u, b.state.u) <= 1e-9);
}

TEST_CASE("step config validation") {
  const State s = equilibrium_state(Grid(2, 8));
  auto bad = [&](auto mutate) {
    StepConfig c;
    mutate(c);
    CHECK_THROWS_AS(picard_step(s, c, kPhys), PreconditionError);
  };
  bad([](StepConfig& c) { c.dt = 0.0; });
  bad([](StepConfig& c) { c.dt_min = 1.0; });
  bad([](StepConfig& c) { c.relaxation = 0.0; });
  bad([](StepConfig& c) { c.max_picard = 0; });
  bad([](StepConfig& c) { c.lame_tol = 1.0; });
  CHECK_THROWS_AS(picard_step(s, StepConfig{}, Physics{0.0, 0.0, {}}), PreconditionError);
  CHECK_THROWS_AS(run_simulation(s, 0.0, StepConfig{}, kPhys), PreconditionError);
}
