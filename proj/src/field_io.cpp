#include "viscoflow/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace viscoflow {
namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return r;
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <int Rank>
void write_raw(std::ostream& os, const Field<Rank>& f, double time) {
  const Grid& g = f.grid();
  os << g.dim() << ' ' << g.n(0) << ' ' << g.n(1) << ' ' << g.n(2) << ' ' << f.components() << ' '
     << format_double(time) << '\n';
  const std::size_t nc = static_cast<std::size_t>(f.components());
  std::vector<std::uint64_t> buf(f.size() * nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto d = f.comp(static_cast<int>(c));
    for (std::size_t i = 0; i < f.size(); ++i)
      buf[i * nc + c] = to_little_endian(std::bit_cast<std::uint64_t>(d[i]));
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
  if (!os) throw IoError("failed writing raw field data");
}

template <int Rank>
void write_raw(const std::filesystem::path& path, const Field<Rank>& f, double time) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_raw(os, f, time);
  os.close();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

RawHeader read_raw_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("missing raw field header");
  std::istringstream hs(line);
  RawHeader h;
  if (!(hs >> h.dim >> h.n[0] >> h.n[1] >> h.n[2] >> h.ncomp >> h.time)) {
    throw IoError("malformed raw field header '" + line + "'");
  }
  return h;
}

template <int Rank>
Field<Rank> read_raw(std::istream& is, double length, double* time) {
  const RawHeader h = read_raw_header(is);
  const Grid g(h.dim, h.n, {length, length, length});
  Field<Rank> f(g);
  if (h.ncomp != f.components()) {
    throw IoError("raw field has " + std::to_string(h.ncomp) + " components, expected " +
                  std::to_string(f.components()));
  }
  const std::size_t nc = static_cast<std::size_t>(h.ncomp);
  std::vector<std::uint64_t> buf(f.size() * nc);
  is.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
  if (static_cast<std::size_t>(is.gcount()) != buf.size() * sizeof(std::uint64_t)) {
    throw IoError("truncated raw field data");
  }
  for (std::size_t c = 0; c < nc; ++c) {
    auto d = f.comp(static_cast<int>(c));
    for (std::size_t i = 0; i < f.size(); ++i)
      d[i] = std::bit_cast<double>(to_little_endian(buf[i * nc + c]));
  }
  if (time) *time = h.time;
  return f;
}

template <int Rank>
Field<Rank> read_raw(const std::filesystem::path& path, double length, double* time) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_raw<Rank>(is, length, time);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

#define VISCOFLOW_INSTANTIATE_IO(R)                                                         \
  template void write_raw(std::ostream&, const Field<R>&, double);                         \
  template void write_raw(const std::filesystem::path&, const Field<R>&, double);          \
  template Field<R> read_raw<R>(std::istream&, double, double*);                           \
  template Field<R> read_raw<R>(const std::filesystem::path&, double, double*);

VISCOFLOW_INSTANTIATE_IO(0)
VISCOFLOW_INSTANTIATE_IO(1)
VISCOFLOW_INSTANTIATE_IO(2)

#undef VISCOFLOW_INSTANTIATE_IO

}  // namespace viscoflow
