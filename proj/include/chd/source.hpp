#pragma once
// Mass-source law S = -(1+phi)^+ gamma(x, t, phi) and the catalogue of
// gamma presets.  Every preset is bounded by |amplitude| and multiplied by
// the taper chi(r) = clamp((2-|r|)/0.5, 0, 1), so gamma vanishes identically
// once |phi| >= 2 and the source is globally bounded and Lipschitz in phi.

#include <algorithm>
#include <cmath>

#include "chd/grid.hpp"

namespace chd {

enum class GammaPreset { Constant, SpaceBump, TimeRamp, SignedLogistic };

struct GammaSpec {
  GammaPreset preset = GammaPreset::Constant;
  double amplitude = 0.0;  // gamma0
  double x0 = 0.5, y0 = 0.5;  // SpaceBump center
  double w = 0.25;            // SpaceBump width
  double t_ramp = 1.0;        // TimeRamp duration

  bool operator==(const GammaSpec&) const = default;
};

inline double cutoff_chi(double r) {
  return std::clamp((2.0 - std::abs(r)) / 0.5, 0.0, 1.0);
}

inline double gamma_eval(const GammaSpec& s, double x, double y, double t,
                         double r) {
  double base = 1.0;
  switch (s.preset) {
    case GammaPreset::Constant:
      break;
    case GammaPreset::SpaceBump: {
      const double dx = x - s.x0, dy = y - s.y0;
      base = std::exp(-(dx * dx + dy * dy) / (s.w * s.w));
      break;
    }
    case GammaPreset::TimeRamp:
      base = (t >= s.t_ramp) ? 1.0 : t / s.t_ramp;
      break;
    case GammaPreset::SignedLogistic:
      base = std::tanh(r);
      break;
  }
  return s.amplitude * base * cutoff_chi(r);
}

inline ScalarField source_S(const GammaSpec& s, const ScalarField& phi,
                            double t) {
  const Grid& g = phi.grid;
  ScalarField out(g, BcKind::NeumannZero);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double r = phi(i, j);
      out(i, j) = -std::max(1.0 + r, 0.0) * gamma_eval(s, g.x(i), g.y(j), t, r);
    }
  return out;
}

// Right-hand side of the order-parameter balance: (1 - phi)^+ S.
inline ScalarField effective_source(const ScalarField& phi,
                                    const ScalarField& S) {
  ScalarField out(phi.grid, BcKind::NeumannZero);
  for (std::size_t k = 0; k < out.data.size(); ++k)
    out.data[k] = std::max(1.0 - phi.data[k], 0.0) * S.data[k];
  return out;
}

}  // namespace chd
