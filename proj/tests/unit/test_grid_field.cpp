#include <doctest.h>

#include "test_support.hpp"
#include "viscoflow/field.hpp"
#include "viscoflow/operators.hpp"

using namespace viscoflow;

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(Grid(1, 16), PreconditionError);
  CHECK_THROWS_AS(Grid(4, 16), PreconditionError);
  CHECK_THROWS_AS(Grid(2, 4), PreconditionError);
  CHECK_THROWS_AS(Grid(2, 24), PreconditionError);
  CHECK_THROWS_AS(Grid(2, 16, 0.0), PreconditionError);
  CHECK_THROWS_AS(Grid(2, 16, -1.0), PreconditionError);
  CHECK_NOTHROW(Grid(3, 8));
}

TEST_CASE("grid spacing and sizes") {
  const Grid g2(2, 32);
  CHECK(g2.size() == 32u * 32u);
  CHECK(g2.n(2) == 1);
  CHECK(g2.h(0) == doctest::Approx(2.0 * vf_test::kPi / 32));
  CHECK(g2.volume() == doctest::Approx(4.0 * vf_test::kPi * vf_test::kPi));

  const Grid g3(3, {8, 16, 32}, {1.0, 2.0, 4.0});
  CHECK(g3.size() == 8u * 16u * 32u);
  CHECK(g3.h(0) == 0.125);
  CHECK(g3.h(2) == 0.125);
  CHECK(g3.volume() == doctest::Approx(8.0));
}

TEST_CASE("index wraps and inverts") {
  const Grid g(3, 8);
  CHECK(g.index(-1, 0, 0) == g.index(7, 0, 0));
  CHECK(g.index(8, 9, -9) == g.index(0, 1, 7));
  for (std::size_t i = 0; i < g.size(); i += 37) {
    const auto m = g.multi_index(i);
    CHECK(g.index(m[0], m[1], m[2]) == i);
  }
  CHECK(Grid::wrap(-17, 8) == 7);
}

TEST_CASE("field arithmetic") {
  const Grid g(2, 8);
  VectorField a(g, 1.0), b(g, 2.0);
  a += b;
  CHECK(a.comp(1)[5] == 3.0);
  a.axpy(-0.5, b);
  CHECK(a.comp(0)[0] == 2.0);
  a *= 2.0;
  CHECK(a.comp(0)[63] == 4.0);
  CHECK(TensorField(g).components() == 4);
  CHECK(TensorField(Grid(3, 8)).components() == 9);
}

TEST_CASE("require_finite names the cell") {
  const Grid g(2, 8);
  ScalarField f(g);
  f[g.index(3, 5)] = std::nan("");
  CHECK_FALSE(f.all_finite());
  try {
    require_finite(f, "rho");
    FAIL("expected a throw");
  } catch (const NonFiniteError& e) {
    CHECK(std::string(e.what()).find("(3,5,0)") != std::string::npos);
  }
}

TEST_CASE("identity tensor") {
  const auto I = identity_tensor(Grid(3, 8));
  CHECK(I.comp(1, 1)[10] == 1.0);
  CHECK(I.comp(0, 2)[10] == 0.0);
}
