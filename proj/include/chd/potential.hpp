#pragma once
// Free-energy families for the order parameter and their regularization.
//
// Three wells: the strongly separating -ln(1-r^2) (blows up at the pure
// states), the classical logarithmic well (bounded energy, singular
// derivative), and the quartic r^4 (smooth everywhere, confines nothing).
// The singular families can be regularized by a half-width eps: f keeps its
// exact form on [-1+eps, 1-eps] and continues affinely outside, F continues
// by the exact antiderivative of that affine branch.  The result is globally
// C^1, convex, even in F and odd in f, with all junction data cached on the
// spec at construction.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "chd/grid.hpp"

namespace chd {

enum class PotentialFamily { StronglySeparating, Logarithmic, Quartic };

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct CoercivityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double bare_F(PotentialFamily fam, double r) {
  switch (fam) {
    case PotentialFamily::StronglySeparating:
      return -std::log(1.0 - r * r);
    case PotentialFamily::Logarithmic:
      return (1.0 + r) * std::log(1.0 + r) + (1.0 - r) * std::log(1.0 - r);
    case PotentialFamily::Quartic:
      return r * r * r * r;
  }
  return 0.0;
}

inline double bare_f(PotentialFamily fam, double r) {
  switch (fam) {
    case PotentialFamily::StronglySeparating:
      return 2.0 * r / (1.0 - r * r);
    case PotentialFamily::Logarithmic:
      return std::log(1.0 + r) - std::log(1.0 - r);
    case PotentialFamily::Quartic:
      return 4.0 * r * r * r;
  }
  return 0.0;
}

inline double bare_fprime(PotentialFamily fam, double r) {
  switch (fam) {
    case PotentialFamily::StronglySeparating: {
      const double d = 1.0 - r * r;
      return 2.0 * (1.0 + r * r) / (d * d);
    }
    case PotentialFamily::Logarithmic:
      return 2.0 / (1.0 - r * r);
    case PotentialFamily::Quartic:
      return 12.0 * r * r;
  }
  return 0.0;
}

inline bool is_singular(PotentialFamily fam) {
  return fam != PotentialFamily::Quartic;
}

}  // namespace detail

struct PotentialSpec {
  PotentialFamily family = PotentialFamily::StronglySeparating;
  double lambda = 0.0;          // concave-part coefficient
  std::optional<double> eps;    // regularization half-width; nullopt = bare
  // junction data at r_plus = 1 - eps; the -r_plus side follows by symmetry
  double r_plus = 0.0, f_plus = 0.0, fp_plus = 0.0, F_plus = 0.0;
};

inline PotentialSpec make_potential(PotentialFamily family, double lambda,
                                    std::optional<double> eps = std::nullopt) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("potential: lambda must be >= 0");
  if (eps && !(*eps > 0.0 && *eps < 0.25))
    throw std::invalid_argument("potential: eps must lie in (0, 0.25)");
  PotentialSpec s;
  s.family = family;
  s.lambda = lambda;
  s.eps = eps;
  if (eps) {
    s.r_plus = 1.0 - *eps;
    s.f_plus = detail::bare_f(family, s.r_plus);
    s.fp_plus = detail::bare_fprime(family, s.r_plus);
    s.F_plus = detail::bare_F(family, s.r_plus);
  }
  return s;
}

namespace detail {
inline void check_domain(const PotentialSpec& s, double r) {
  if (!s.eps && is_singular(s.family) && !(std::abs(r) < 1.0))
    throw DomainError("potential: |r| < 1 required for the unregularized well (r = " +
                      std::to_string(r) + ")");
}
}  // namespace detail

inline double eval_F(const PotentialSpec& s, double r) {
  if (s.eps) {
    const double a = std::abs(r);
    if (a > s.r_plus) {
      const double d = a - s.r_plus;
      return s.F_plus + s.f_plus * d + 0.5 * s.fp_plus * d * d;
    }
    return detail::bare_F(s.family, r);
  }
  detail::check_domain(s, r);
  return detail::bare_F(s.family, r);
}

inline double eval_f(const PotentialSpec& s, double r) {
  if (s.eps) {
    const double a = std::abs(r);
    if (a > s.r_plus) {
      const double t = s.f_plus + s.fp_plus * (a - s.r_plus);
      return r < 0.0 ? -t : t;
    }
    return detail::bare_f(s.family, r);
  }
  detail::check_domain(s, r);
  return detail::bare_f(s.family, r);
}

inline double eval_fprime(const PotentialSpec& s, double r) {
  if (s.eps) {
    const double a = std::abs(r);
    if (a > s.r_plus) return s.fp_plus;
    return detail::bare_fprime(s.family, r);
  }
  detail::check_domain(s, r);
  return detail::bare_fprime(s.family, r);
}

// Smallest k >= 0 (to sampling accuracy) with F(r)/2 - (lambda/2) r^2 + k >= 0
// for every r.  Requires an everywhere-defined F (regularized or quartic).
// The quadratic tail of F/2 must dominate (lambda/2) r^2, otherwise no finite
// k exists and CoercivityFailure is thrown.
inline double coercivity_shift(const PotentialSpec& s) {
  if (!s.eps && detail::is_singular(s.family))
    throw std::invalid_argument(
        "coercivity_shift: requires a regularized or quartic potential");
  const auto g = [&](double r) {
    return 0.5 * eval_F(s, r) - 0.5 * s.lambda * r * r;
  };
  double reach = 2.0;
  if (s.eps) {
    const double tail_quad = 0.25 * s.fp_plus - 0.5 * s.lambda;
    if (!(tail_quad > 0.0))
      throw CoercivityFailure(
          "coercivity_shift: lambda too large, quadratic tail does not dominate");
    // stationary point of the tail parabola bounds where the minimum can sit
    const double tail_lin = 0.5 * s.f_plus - s.lambda * s.r_plus;
    reach = std::max(reach, s.r_plus + std::max(0.0, -tail_lin) / (2.0 * tail_quad) + 1.0);
  } else {
    reach = std::max(reach, std::sqrt(std::max(1.0, 0.5 * s.lambda)) + 1.0);
  }
  const int n = 1 << 16;
  double best_r = 0.0, best = g(0.0);
  for (int i = 1; i <= n; ++i) {
    const double r = reach * double(i) / n;
    const double v = g(r);
    if (v < best) { best = v; best_r = r; }
  }
  // golden-section polish on the bracketing interval
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::max(0.0, best_r - reach / n), hi = std::min(reach, best_r + reach / n);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (gc < gd) { hi = d; d = c; gd = gc; c = hi - gr * (hi - lo); gc = g(c); }
    else { lo = c; c = d; gc = gd; d = lo + gr * (hi - lo); gd = g(d); }
  }
  best = std::min(best, std::min(gc, gd));
  return std::max(0.0, -best);
}

// Total regularized free energy of a field:
//   E = 1/2 |grad phi|^2 + sum (F(phi) - (lambda/2) phi^2) hx hy.
inline double bulk_energy(const ScalarField& phi, const PotentialSpec& s) {
  double bulk = 0.0;
  for (double v : phi.data) bulk += eval_F(s, v) - 0.5 * s.lambda * v * v;
  bulk *= phi.grid.cell_area();
  const double gnorm = h1seminorm(phi);
  return 0.5 * gnorm * gnorm + bulk;
}

}  // namespace chd
