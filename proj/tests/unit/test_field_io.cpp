#include <doctest.h>

#include <cstring>
#include <sstream>

#include "test_support.hpp"
#include "viscoflow/field_io.hpp"

using namespace viscoflow;

TEST_CASE("header line and little-endian payload") {
  const Grid g(2, 8);
  ScalarField f(g);
  f[0] = 1.0;
  f[1] = -2.5;
  std::ostringstream os;
  write_raw(os, f, 0.25);
  const std::string s = os.str();
  const auto nl = s.find('\n');
  CHECK(s.substr(0, nl) == "2 8 8 1 1 0.25");
  REQUIRE(s.size() == nl + 1 + 64 * 8);
  // 1.0 = 0x3FF0000000000000, least significant byte first
  const unsigned char* p = reinterpret_cast<const unsigned char*>(s.data() + nl + 1);
  for (int k = 0; k < 6; ++k) CHECK(p[k] == 0);
  CHECK(p[6] == 0xF0);
  CHECK(p[7] == 0x3F);
}

TEST_CASE("components are innermost") {
  const Grid g(2, 8);
  VectorField v(g);
  v.comp(0)[0] = 1.0;
  v.comp(1)[0] = 2.0;
  v.comp(0)[1] = 3.0;
  std::ostringstream os;
  write_raw(os, v, 0.0);
  const std::string s = os.str();
  const char* p = s.data() + s.find('\n') + 1;
  double vals[3];
  std::memcpy(vals, p, sizeof vals);
  CHECK(vals[0] == 1.0);
  CHECK(vals[1] == 2.0);
  CHECK(vals[2] == 3.0);
}

TEST_CASE("round trip is bit-exact") {
  for (int dim : {2, 3}) {
    const Grid g(dim, 8);
    const auto T = vf_test::random_field<2>(g, 17);
    std::stringstream ss;
    write_raw(ss, T, 1.0 / 3.0);
    double t = 0.0;
    const auto back = read_raw<2>(ss, g.length(0), &t);
    CHECK(back == T);
    CHECK(t == 1.0 / 3.0);
  }
}

TEST_CASE("malformed input raises IoError") {
  std::istringstream bad_header("2 8 x 1 1 0\n");
  CHECK_THROWS_AS(read_raw<0>(bad_header, 1.0), IoError);
  std::istringstream truncated(std::string("2 8 8 1 1 0\n") + std::string(16, '\0'));
  CHECK_THROWS_AS(read_raw<0>(truncated, 1.0), IoError);
  std::istringstream wrong_rank(std::string("2 8 8 1 2 0\n") + std::string(64 * 16, '\0'));
  CHECK_THROWS_AS(read_raw<0>(wrong_rank, 1.0), IoError);
  CHECK_THROWS_AS(read_raw<0>(std::filesystem::path("/nonexistent/rho.raw"), 1.0), IoError);
}

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
