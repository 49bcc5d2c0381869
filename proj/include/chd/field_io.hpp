#pragma once
// Text snapshots of scalar fields.  One header line
//   # CHDF <name> nx=<nx> ny=<ny> lx=<lx> ly=<ly> t=<time>
// followed by ny rows of nx values.  Values are written with 17 significant
// digits so a write/read round trip reproduces every double bitwise.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chd/grid.hpp"

namespace chd {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  std::string name;
  double t = 0.0;
  Grid grid;
  std::vector<double> data;  // row-major, same layout as ScalarField
};

namespace detail {
inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_snapshot(std::ostream& os, const std::string& name,
                           const ScalarField& f, double t) {
  if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
    throw IoError("write_snapshot: name must be a single non-empty token");
  const Grid& g = f.grid;
  os << "# CHDF " << name << " nx=" << g.nx << " ny=" << g.ny
     << " lx=" << detail::format_g17(g.lx) << " ly=" << detail::format_g17(g.ly)
     << " t=" << detail::format_g17(t) << "\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) os << ' ';
      os << detail::format_g17(f(i, j));
    }
    os << '\n';
  }
}

inline void write_snapshot(const std::string& path, const std::string& name,
                           const ScalarField& f, double t) {
  std::ofstream os(path);
  if (!os) throw IoError("write_snapshot: cannot open " + path);
  write_snapshot(os, name, f, t);
  if (!os) throw IoError("write_snapshot: write failed for " + path);
}

inline Snapshot read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("read_snapshot: empty input");
  std::istringstream hs(line);
  std::string hash, magic;
  Snapshot snap;
  hs >> hash >> magic >> snap.name;
  if (hash != "#" || magic != "CHDF" || snap.name.empty())
    throw IoError("read_snapshot: bad header: " + line);
  bool have_t = false;
  int have_dims = 0;
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw IoError("read_snapshot: bad header token: " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    try {
      if (key == "nx") { snap.grid.nx = std::stoi(val); ++have_dims; }
      else if (key == "ny") { snap.grid.ny = std::stoi(val); ++have_dims; }
      else if (key == "lx") { snap.grid.lx = std::stod(val); ++have_dims; }
      else if (key == "ly") { snap.grid.ly = std::stod(val); ++have_dims; }
      else if (key == "t") { snap.t = std::stod(val); have_t = true; }
      else throw IoError("read_snapshot: unknown header key: " + key);
    } catch (const std::logic_error&) {
      throw IoError("read_snapshot: bad value for " + key + ": " + val);
    }
  }
  if (have_dims != 4 || !have_t)
    throw IoError("read_snapshot: header is missing nx/ny/lx/ly/t: " + line);
  if (snap.grid.nx < 1 || snap.grid.ny < 1)
    throw IoError("read_snapshot: bad dimensions in header: " + line);
  snap.data.resize(snap.grid.cells());
  for (std::size_t k = 0; k < snap.data.size(); ++k)
    if (!(is >> snap.data[k]))
      throw IoError("read_snapshot: truncated data after " +
                    std::to_string(k) + " of " +
                    std::to_string(snap.data.size()) + " values");
  return snap;
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("read_snapshot: cannot open " + path);
  return read_snapshot(is);
}

inline ScalarField snapshot_field(const Snapshot& snap, BcKind bc) {
  ScalarField f(snap.grid, bc);
  f.data = snap.data;
  return f;
}

}  // namespace chd
