#include <doctest.h>

#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "viscoflow/initial.hpp"
#include "viscoflow/snapshot.hpp"

using namespace viscoflow;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(d);
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("snapshot round trip is bit-identical in 2D and 3D") {
  for (int d : {2, 3}) {
    const auto dir = fresh_dir("viscoflow_snapshot_rt" + std::to_string(d));
    State s = random_smooth_state(Grid(d, 16), 0.3, 5);
    add_cell_flow(s, 0.2, 1);
    s.t = 0.375;
    const auto files = write_snapshot(s, dir, 3);
    CHECK(files.directory == dir / "snapshot_3");
    CHECK(std::filesystem::exists(files.rho));
    const State back = read_snapshot(files.directory);
    CHECK(back == s);
    CHECK(vf_test::hash_field(back.F) == vf_test::hash_field(s.F));
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("rewriting a read snapshot reproduces the bytes") {
  const auto dir = fresh_dir("viscoflow_snapshot_bytes");
  State s = random_smooth_state(Grid(2, 16), 0.2, 9);
  s.t = 0.1;
  const auto a = write_snapshot(s, dir, 0);
  const auto b = write_snapshot(read_snapshot(a.directory), dir, 1);
  for (auto [p, q] : {std::pair{a.rho, b.rho}, std::pair{a.u, b.u}, std::pair{a.F, b.F}}) CHECK(slurp(p) == slurp(q));
  // payloads agree with different times too: only the header line changes
  s.t = 0.2;
  const auto c = write_snapshot(s, dir, 2);
  const std::string x = slurp(a.F), y = slurp(c.F);
  CHECK(x != y);
  CHECK(x.substr(x.find('\n')) == y.substr(y.find('\n')));
  std::filesystem::remove_all(dir);
}

TEST_CASE("index file lists every snapshot") {
  const auto dir = fresh_dir("viscoflow_snapshot_index");
  State s = equilibrium_state(Grid(2, 8));
  for (int i = 0; i < 3; ++i) {
    s.t = 0.5 * i;
    write_snapshot(s, dir, i);
  }
  std::ifstream is(dir / "snapshots.index");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1] == "1 0.5 snapshot_1/rho.raw snapshot_1/u.raw snapshot_1/F.raw");
  std::filesystem::remove_all(dir);
}

TEST_CASE("missing snapshot is an I/O error") {
  CHECK_THROWS_AS(read_snapshot("/nonexistent/snapshot_0"), IoError);
}
