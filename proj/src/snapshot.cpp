#include "viscoflow/snapshot.hpp"

#include <fstream>

#include "viscoflow/field_io.hpp"

namespace viscoflow {

namespace fs = std::filesystem;

SnapshotFiles write_snapshot(const State& s, const fs::path& dir, int index) {
  const std::string name = "snapshot_" + std::to_string(index);
  SnapshotFiles f{dir / name, dir / name / "rho.raw", dir / name / "u.raw", dir / name / "F.raw"};
  std::error_code ec;
  fs::create_directories(f.directory, ec);
  if (ec) throw IoError("cannot create " + f.directory.string() + ": " + ec.message());
  write_raw(f.rho, s.rho, s.t);
  write_raw(f.u, s.u, s.t);
  write_raw(f.F, s.F, s.t);

  const fs::path index_path = dir / "snapshots.index";
  std::ofstream os(index_path, std::ios::app);
  if (!os) throw IoError("cannot append to " + index_path.string());
  os << index << ' ' << format_double(s.t) << ' ' << name << "/rho.raw " << name << "/u.raw " << name << "/F.raw\n";
  if (!os.flush()) throw IoError("write failed on " + index_path.string());
  return f;
}

State read_snapshot(const fs::path& snapshot_dir, double length) {
  if (!fs::is_directory(snapshot_dir)) throw IoError("snapshot directory " + snapshot_dir.string() + " not found");
  State s;
  s.rho = read_raw<0>(snapshot_dir / "rho.raw", length, &s.t);
  s.u = read_raw<1>(snapshot_dir / "u.raw", length);
  s.F = read_raw<2>(snapshot_dir / "F.raw", length);
  require_same_grid(s.rho, s.u, "read_snapshot");
  require_same_grid(s.rho, s.F, "read_snapshot");
  return s;
}

}  // namespace viscoflow
