#pragma once
// Run description: an INI-style file with [section] headers, key = value
// lines and '#' comments.  Unknown sections or keys are hard errors, every
// parse or validation failure carries the offending line number, and
// render_config emits a canonical file that parses back bitwise-identical.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "chd/grid.hpp"
#include "chd/potential.hpp"
#include "chd/source.hpp"

namespace chd {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InitialKind { Random, Stripe, Disk, Constant };

struct TimeSpec {
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_every = 0;  // steps between field snapshots; 0 disables

  bool operator==(const TimeSpec&) const = default;
};

struct PotentialChoice {
  PotentialFamily family = PotentialFamily::StronglySeparating;
  double lambda = 3.0;
  std::optional<double> eps = 0.05;

  bool operator==(const PotentialChoice&) const = default;
};

struct InitialSpec {
  InitialKind kind = InitialKind::Random;
  double m0 = 0.0;
  double amplitude = 0.05;
  std::uint64_t seed = 1;

  bool operator==(const InitialSpec&) const = default;
};

struct SolverSpec {
  double newton_tol = 1e-10;
  int newton_max = 50;
  double cg_tol = 1e-11;
  double cfl_safety = 0.5;
  double dt_min = 0.0;  // 0 = dt/1024
  bool couple_flow = true;

  bool operator==(const SolverSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix = "run";

  bool operator==(const OutputSpec&) const = default;
};

struct SimConfig {
  Grid grid{64, 64, 1.0, 1.0};
  TimeSpec time;
  PotentialChoice potential;
  GammaSpec gamma;
  InitialSpec initial;
  SolverSpec solver;
  OutputSpec output;

  bool operator==(const SimConfig&) const = default;
};

// ---------------------------------------------------------------------------
// enum spellings

inline std::string to_string(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::StronglySeparating: return "strongly_separating";
    case PotentialFamily::Logarithmic: return "logarithmic";
    case PotentialFamily::Quartic: return "quartic";
  }
  return "?";
}

inline std::string to_string(GammaPreset p) {
  switch (p) {
    case GammaPreset::Constant: return "constant";
    case GammaPreset::SpaceBump: return "space_bump";
    case GammaPreset::TimeRamp: return "time_ramp";
    case GammaPreset::SignedLogistic: return "signed_logistic";
  }
  return "?";
}

inline std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Random: return "random";
    case InitialKind::Stripe: return "stripe";
    case InitialKind::Disk: return "disk";
    case InitialKind::Constant: return "constant";
  }
  return "?";
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

inline double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty())
    fail(line, "expected a number, got '" + v + "'");
  return x;
}

inline long long parse_int(const std::string& v, int line) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty())
    fail(line, "expected an integer, got '" + v + "'");
  return x;
}

inline std::uint64_t parse_uint(const std::string& v, int line) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty() || v[0] == '-')
    fail(line, "expected a non-negative integer, got '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& v, int line) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  fail(line, "expected on/off, got '" + v + "'");
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

// Semantic checks shared by the parser and by programmatic construction.
// line = 0 marks errors that did not come from a file.
inline void check_config(const SimConfig& c, int line = 0) {
  const auto fail = [line](const std::string& msg) {
    if (line > 0) detail::fail(line, msg);
    throw ConfigError(msg);
  };
  for (double v : {c.grid.lx, c.grid.ly, c.time.dt, c.time.t_end,
                   c.potential.lambda, c.gamma.amplitude, c.gamma.x0,
                   c.gamma.y0, c.gamma.w, c.gamma.t_ramp, c.initial.m0,
                   c.initial.amplitude, c.solver.newton_tol, c.solver.cg_tol,
                   c.solver.cfl_safety, c.solver.dt_min})
    if (!std::isfinite(v)) fail("non-finite value");
  if (c.grid.nx < 4 || c.grid.ny < 4) fail("grid: nx and ny must be >= 4");
  if (!(c.grid.lx > 0.0) || !(c.grid.ly > 0.0))
    fail("grid: lx and ly must be > 0");
  if (!(c.time.dt > 0.0)) fail("time: dt must be > 0");
  if (!(c.time.t_end >= 0.0)) fail("time: t_end must be >= 0");
  if (c.time.snapshot_every < 0) fail("time: snapshot_every must be >= 0");
  if (!(c.potential.lambda >= 0.0)) fail("potential: lambda must be >= 0");
  if (c.potential.eps) {
    if (!(*c.potential.eps > 0.0 && *c.potential.eps < 0.25))
      fail("potential: eps must lie in (0, 0.25)");
  } else if (c.potential.family != PotentialFamily::Quartic) {
    fail("potential: eps is required for the singular families");
  }
  if (!(c.gamma.w > 0.0)) fail("gamma: w must be > 0");
  if (!(c.gamma.t_ramp > 0.0)) fail("gamma: t_ramp must be > 0");
  if (!(c.initial.amplitude >= 0.0)) fail("initial: amplitude must be >= 0");
  if (!(std::abs(c.initial.m0) + c.initial.amplitude < 1.0))
    fail("initial: |m0| + amplitude must be < 1");
  if (!(c.solver.newton_tol > 0.0)) fail("solver: newton_tol must be > 0");
  if (c.solver.newton_max < 1) fail("solver: newton_max must be >= 1");
  if (!(c.solver.cg_tol > 0.0)) fail("solver: cg_tol must be > 0");
  if (!(c.solver.cfl_safety > 0.0 && c.solver.cfl_safety <= 1.0))
    fail("solver: cfl_safety must lie in (0, 1]");
  if (c.solver.dt_min < 0.0 || c.solver.dt_min > c.time.dt)
    fail("solver: dt_min must lie in [0, dt]");
  if (c.output.dir.empty() || c.output.prefix.empty())
    fail("output: dir and prefix must be non-empty");
}

inline SimConfig parse_config(std::istream& in) {
  SimConfig c;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = detail::trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') detail::fail(line, "unterminated section header");
      section = detail::trim(s.substr(1, s.size() - 2));
      if (section != "grid" && section != "time" && section != "potential" &&
          section != "gamma" && section != "initial" && section != "solver" &&
          section != "output")
        detail::fail(line, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) detail::fail(line, "expected key = value");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string val = detail::trim(s.substr(eq + 1));
    if (section.empty()) detail::fail(line, "key outside any section");
    if (key.empty()) detail::fail(line, "empty key");

    using namespace detail;
    if (section == "grid") {
      if (key == "nx") c.grid.nx = int(parse_int(val, line));
      else if (key == "ny") c.grid.ny = int(parse_int(val, line));
      else if (key == "lx") c.grid.lx = parse_double(val, line);
      else if (key == "ly") c.grid.ly = parse_double(val, line);
      else fail(line, "unknown key '" + key + "' in [grid]");
    } else if (section == "time") {
      if (key == "dt") c.time.dt = parse_double(val, line);
      else if (key == "t_end") c.time.t_end = parse_double(val, line);
      else if (key == "snapshot_every")
        c.time.snapshot_every = int(parse_int(val, line));
      else fail(line, "unknown key '" + key + "' in [time]");
    } else if (section == "potential") {
      if (key == "family") {
        if (val == "strongly_separating")
          c.potential.family = PotentialFamily::StronglySeparating;
        else if (val == "logarithmic")
          c.potential.family = PotentialFamily::Logarithmic;
        else if (val == "quartic")
          c.potential.family = PotentialFamily::Quartic;
        else fail(line, "unknown potential family '" + val + "'");
      } else if (key == "lambda") {
        c.potential.lambda = parse_double(val, line);
      } else if (key == "eps") {
        if (val == "none") c.potential.eps.reset();
        else c.potential.eps = parse_double(val, line);
      } else fail(line, "unknown key '" + key + "' in [potential]");
    } else if (section == "gamma") {
      if (key == "preset") {
        if (val == "constant") c.gamma.preset = GammaPreset::Constant;
        else if (val == "space_bump") c.gamma.preset = GammaPreset::SpaceBump;
        else if (val == "time_ramp") c.gamma.preset = GammaPreset::TimeRamp;
        else if (val == "signed_logistic")
          c.gamma.preset = GammaPreset::SignedLogistic;
        else fail(line, "unknown gamma preset '" + val + "'");
      } else if (key == "amplitude") c.gamma.amplitude = parse_double(val, line);
      else if (key == "x0") c.gamma.x0 = parse_double(val, line);
      else if (key == "y0") c.gamma.y0 = parse_double(val, line);
      else if (key == "w") c.gamma.w = parse_double(val, line);
      else if (key == "t_ramp") c.gamma.t_ramp = parse_double(val, line);
      else fail(line, "unknown key '" + key + "' in [gamma]");
    } else if (section == "initial") {
      if (key == "kind") {
        if (val == "random") c.initial.kind = InitialKind::Random;
        else if (val == "stripe") c.initial.kind = InitialKind::Stripe;
        else if (val == "disk") c.initial.kind = InitialKind::Disk;
        else if (val == "constant") c.initial.kind = InitialKind::Constant;
        else fail(line, "unknown initial kind '" + val + "'");
      } else if (key == "m0") c.initial.m0 = parse_double(val, line);
      else if (key == "amplitude") c.initial.amplitude = parse_double(val, line);
      else if (key == "seed") c.initial.seed = parse_uint(val, line);
      else fail(line, "unknown key '" + key + "' in [initial]");
    } else if (section == "solver") {
      if (key == "newton_tol") c.solver.newton_tol = parse_double(val, line);
      else if (key == "newton_max")
        c.solver.newton_max = int(parse_int(val, line));
      else if (key == "cg_tol") c.solver.cg_tol = parse_double(val, line);
      else if (key == "cfl_safety")
        c.solver.cfl_safety = parse_double(val, line);
      else if (key == "dt_min") c.solver.dt_min = parse_double(val, line);
      else if (key == "couple_flow")
        c.solver.couple_flow = parse_bool(val, line);
      else fail(line, "unknown key '" + key + "' in [solver]");
    } else if (section == "output") {
      if (key == "dir") c.output.dir = val;
      else if (key == "prefix") c.output.prefix = val;
      else fail(line, "unknown key '" + key + "' in [output]");
    }
  }
  check_config(c);
  return c;
}

inline SimConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

inline std::string render_config(const SimConfig& c) {
  using detail::format_double;
  std::ostringstream out;
  out << "[grid]\n"
      << "nx = " << c.grid.nx << "\n"
      << "ny = " << c.grid.ny << "\n"
      << "lx = " << format_double(c.grid.lx) << "\n"
      << "ly = " << format_double(c.grid.ly) << "\n\n";
  out << "[time]\n"
      << "dt = " << format_double(c.time.dt) << "\n"
      << "t_end = " << format_double(c.time.t_end) << "\n"
      << "snapshot_every = " << c.time.snapshot_every << "\n\n";
  out << "[potential]\n"
      << "family = " << to_string(c.potential.family) << "\n"
      << "lambda = " << format_double(c.potential.lambda) << "\n"
      << "eps = "
      << (c.potential.eps ? format_double(*c.potential.eps) : std::string("none"))
      << "\n\n";
  out << "[gamma]\n"
      << "preset = " << to_string(c.gamma.preset) << "\n"
      << "amplitude = " << format_double(c.gamma.amplitude) << "\n"
      << "x0 = " << format_double(c.gamma.x0) << "\n"
      << "y0 = " << format_double(c.gamma.y0) << "\n"
      << "w = " << format_double(c.gamma.w) << "\n"
      << "t_ramp = " << format_double(c.gamma.t_ramp) << "\n\n";
  out << "[initial]\n"
      << "kind = " << to_string(c.initial.kind) << "\n"
      << "m0 = " << format_double(c.initial.m0) << "\n"
      << "amplitude = " << format_double(c.initial.amplitude) << "\n"
      << "seed = " << c.initial.seed << "\n\n";
  out << "[solver]\n"
      << "newton_tol = " << format_double(c.solver.newton_tol) << "\n"
      << "newton_max = " << c.solver.newton_max << "\n"
      << "cg_tol = " << format_double(c.solver.cg_tol) << "\n"
      << "cfl_safety = " << format_double(c.solver.cfl_safety) << "\n"
      << "dt_min = " << format_double(c.solver.dt_min) << "\n"
      << "couple_flow = " << (c.solver.couple_flow ? "on" : "off") << "\n\n";
  out << "[output]\n"
      << "dir = " << c.output.dir << "\n"
      << "prefix = " << c.output.prefix << "\n";
  return out.str();
}

}  // namespace chd
