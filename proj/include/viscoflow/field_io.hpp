#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "viscoflow/field.hpp"

namespace viscoflow {

// Raw field dump: one ASCII header line "dim n1 n2 n3 ncomp time\n" followed
// by little-endian float64 samples, row-major over grid points with the
// components innermost. A 2D grid writes n3 = 1.

struct RawHeader {
  int dim = 0;
  std::array<int, 3> n{1, 1, 1};
  int ncomp = 0;
  double time = 0.0;
};

template <int Rank>
void write_raw(std::ostream& os, const Field<Rank>& f, double time);

template <int Rank>
void write_raw(const std::filesystem::path& path, const Field<Rank>& f, double time);

RawHeader read_raw_header(std::istream& is);

/// Reads a dump; the box length is not part of the format and is supplied by the caller.
template <int Rank>
Field<Rank> read_raw(std::istream& is, double length, double* time = nullptr);

template <int Rank>
Field<Rank> read_raw(const std::filesystem::path& path, double length, double* time = nullptr);

/// Time formatted with 17 significant digits.
std::string format_double(double x);

}  // namespace viscoflow
