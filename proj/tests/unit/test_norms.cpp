#include <doctest.h>

#include "test_support.hpp"
#include "viscoflow/norms.hpp"

using namespace viscoflow;
using vf_test::kPi;

TEST_CASE("constant field norms") {
  for (int dim : {2, 3}) {
    const Grid g(dim, 16);
    const double V = std::pow(2 * kPi, dim);
    const ScalarField c(g, 1.7);
    CHECK(discrete_norm(c, NormKind::kL2) == doctest::Approx(1.7 * std::sqrt(V)).epsilon(1e-13));
    CHECK(discrete_norm(c, NormKind::kL1) == doctest::Approx(1.7 * V).epsilon(1e-13));
    CHECK(discrete_norm(c, NormKind::kLq, 4.0) == doctest::Approx(1.7 * std::pow(V, 0.25)).epsilon(1e-13));
    CHECK(discrete_norm(c, NormKind::kLinf) == 1.7);
    // gradient of a constant is exactly zero
    CHECK(discrete_norm(c, NormKind::kW1q, 4.0) == doctest::Approx(1.7 * std::pow(V, 0.25)).epsilon(1e-13));
  }
}

TEST_CASE("sin(x0) norms against closed-form integrals") {
  // Midpoint rule is exact for trig polynomials of degree < n.
  const Grid g(3, 16);
  const auto f = make_field<0>(g, [](const auto& x, int) { return std::sin(x[0]); });
  const double side = 4.0 * kPi * kPi;  // integral over x1, x2
  CHECK(discrete_norm(f, NormKind::kL2) == doctest::Approx(std::sqrt(kPi * side)).epsilon(1e-13));
  CHECK(discrete_norm(f, NormKind::kLq, 4.0) == doctest::Approx(std::pow(0.75 * kPi * side, 0.25)).epsilon(1e-13));
  CHECK(discrete_norm(f, NormKind::kLq, 6.0) ==
        doctest::Approx(std::pow(2 * kPi * 5.0 / 16.0 * side, 1.0 / 6.0)).epsilon(1e-13));
  // W1q adds ||cos x0||_q, which has the same value; derivative is only O(h^4) accurate
  CHECK(discrete_norm(f, NormKind::kW1q, 4.0) == doctest::Approx(2.0 * std::pow(0.75 * kPi * side, 0.25)).epsilon(1e-3));
}

TEST_CASE("L1 of |sin| converges to 4 (2 pi)^(d-1)") {
  const Grid g(2, 64);
  const auto f = make_field<0>(g, [](const auto& x, int) { return std::sin(x[0]); });
  CHECK(discrete_norm(f, NormKind::kL1) == doctest::Approx(4.0 * 2 * kPi).epsilon(1e-3));
}

TEST_CASE("Linf is the largest sample magnitude") {
  const Grid g(2, 16);
  auto f = vf_test::random_field<0>(g, 4);
  f[77] = -3.25;
  CHECK(discrete_norm(f, NormKind::kLinf) == 3.25);
  VectorField v(g);
  v.comp(0)[5] = 3.0;
  v.comp(1)[5] = -4.0;
  CHECK(discrete_norm(v, NormKind::kLinf) == 5.0);
}

TEST_CASE("vector and tensor norms are pointwise Euclidean") {
  const Grid g(2, 8);
  TensorField T(g, 0.5);
  const double V = 4 * kPi * kPi;
  CHECK(discrete_norm(T, NormKind::kL2) == doctest::Approx(std::sqrt(4 * 0.25 * V)).epsilon(1e-13));
}

TEST_CASE("q outside (3, 6] and unknown kinds are rejected") {
  const Grid g(2, 8);
  const ScalarField f(g, 1.0);
  CHECK_THROWS_AS(discrete_norm(f, NormKind::kLq, 3.0), PreconditionError);
  CHECK_THROWS_AS(discrete_norm(f, NormKind::kW1q, 6.5), PreconditionError);
  CHECK_NOTHROW(discrete_norm(f, NormKind::kLq, 6.0));
  CHECK_THROWS_AS(parse_norm_kind("H2"), PreconditionError);
  CHECK(parse_norm_kind("W1q") == NormKind::kW1q);
}

TEST_CASE("integrate and dot") {
  const Grid g(2, 16);
  const auto f = make_field<0>(g, [](const auto& x, int) { return 2.0 + std::cos(x[1]); });
  CHECK(integrate(f) == doctest::Approx(2.0 * 4 * kPi * kPi).epsilon(1e-13));
  const auto a = vf_test::random_field<1>(g, 1), b = vf_test::random_field<1>(g, 2);
  double ref = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) ref += a.comp(c)[i] * b.comp(c)[i];
  CHECK(dot(a, b) == doctest::Approx(ref).epsilon(1e-13));
  CHECK(dot(a, b) == dot(b, a));
}
