#pragma once

#include <filesystem>

#include "viscoflow/state.hpp"

namespace viscoflow {

struct SnapshotFiles {
  std::filesystem::path directory;  // <dir>/snapshot_<index>
  std::filesystem::path rho, u, F;
};

/// Writes <dir>/snapshot_<index>/{rho,u,F}.raw and appends
/// "<index> <time> <rho> <u> <F>" (paths relative to dir) to <dir>/snapshots.index.
SnapshotFiles write_snapshot(const State& s, const std::filesystem::path& dir, int index);

/// Reads a snapshot directory written by write_snapshot.
State read_snapshot(const std::filesystem::path& snapshot_dir, double length = 6.283185307179586);

}  // namespace viscoflow
