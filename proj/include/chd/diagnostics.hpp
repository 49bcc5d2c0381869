#pragma once
// Per-step health measurements and their CSV serialization.
//
// The energy budget is evaluated at the scheme's own time levels: the
// implicit potential mu~ = A phi' + f(phi') - lambda phi pairs with the
// old-level source and transport, the pressure work with the new-level
// source.  For a transport-free step the budget reduces to the convexity
// inequality and its residual is nonpositive up to the Newton defect; with
// the flow coupled it measures the O(dt) bookkeeping mismatch and shrinks
// under time refinement.
//
// The mean-confinement check turns the coercivity certificate of the well
// into a bound: F(phi_mean) <= average of F <= 2 (E + k |Omega|) / |Omega|
// by convexity, so the mean can never approach +-1 closer than a computable
// margin delta as long as the recorded energies stay below the given bound.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "chd/potential.hpp"
#include "chd/solver.hpp"
#include "chd/source.hpp"

namespace chd {

struct DiagnosticsRecord {
  long step = 0;
  double t = 0.0;
  double energy = 0.0;
  double energy_residual = 0.0;
  double mean_phi = 0.0;
  double min_phi = 0.0;
  double max_phi = 0.0;
  double overshoot_plus = 0.0;
  double overshoot_minus = 0.0;
  double grad_excess = 0.0;
  double mass_residual = 0.0;
  double boundary_transport = 0.0;
  double l2_u = 0.0;
  double l2_grad_mu = 0.0;
  int newton_iters = 0;
  int cg_iters = 0;
  double dt_used = 0.0;
};

inline double total_energy(const SimState& s, const PotentialSpec& pot) {
  return bulk_energy(s.phi, pot);
}

inline double energy_budget(const SimState& prev, const SimState& next,
                            double dt, const PotentialSpec& pot,
                            const GammaSpec& gamma) {
  ScalarField mu_t = laplacian(next.phi);
  for (std::size_t k = 0; k < mu_t.data.size(); ++k)
    mu_t.data[k] = -mu_t.data[k] + eval_f(pot, next.phi.data[k]) -
                   pot.lambda * prev.phi.data[k];
  const double gmu = h1seminorm(mu_t);
  const double uu = l2norm(next.u);
  const ScalarField eff =
      effective_source(prev.phi, source_S(gamma, prev.phi, prev.t));
  const double src_work = inner(eff, mu_t);
  const double p_work = inner(source_S(gamma, next.phi, next.t), next.p);
  const double dE =
      bulk_energy(next.phi, pot) - bulk_energy(prev.phi, pot);
  return dE / dt + gmu * gmu + uu * uu - src_work - p_work;
}

struct MassBalance {
  double mass_residual = 0.0;
  double boundary_transport = 0.0;
};

// Defect of the discrete mass identity over one step:
//   d/dt int phi = int (1-phi)^+ S - int u . grad phi
// (the potential flux integrates to zero by the no-flux closure).  The
// boundary_transport entry is the Gauss-Green flux of phi u through the
// walls, reported for bookkeeping.
inline MassBalance mass_balance(const SimState& prev, const SimState& next,
                                double dt, const GammaSpec& gamma) {
  const Grid& g = prev.phi.grid;
  const ScalarField eff =
      effective_source(prev.phi, source_S(gamma, prev.phi, prev.t));
  double src = 0.0;
  for (double v : eff.data) src += v;
  src *= g.cell_area();
  const ScalarField adv = cell_dot(prev.u, gradient(prev.phi));
  double transported = 0.0;
  for (double v : adv.data) transported += v;
  transported *= g.cell_area();
  MassBalance out;
  out.mass_residual =
      (mean(next.phi) - mean(prev.phi)) * g.area() / dt - src + transported;
  out.boundary_transport = boundary_flux(prev.phi, prev.u);
  return out;
}

struct SeparationReport {
  double max_abs = 0.0;
  double overshoot_plus = 0.0;
  double overshoot_minus = 0.0;
  double grad_excess = 0.0;
};

// Quadratic overshoot beyond the regularized wells at +-(1 - eps) and the
// gradient mass carried by the overshooting cells.
inline SeparationReport separation_report(const ScalarField& phi, double eps) {
  const Grid& g = phi.grid;
  const double thr = 1.0 - eps;
  const double h2 = g.cell_area();
  SeparationReport out;
  const ScalarField gsq = cell_dot(gradient(phi), gradient(phi));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double v = phi(i, j);
      out.max_abs = std::max(out.max_abs, std::abs(v));
      if (v > thr) out.overshoot_plus += (v - thr) * (v - thr) * h2;
      if (v < -thr) out.overshoot_minus += (v + thr) * (v + thr) * h2;
      if (std::abs(v) > thr) out.grad_excess += gsq(i, j) * h2;
    }
  return out;
}

struct MeanConfinement {
  double delta = 0.0;
  bool ok = false;
};

// Largest admissible |mean| given an energy bound: bisect the even, on
// [0, 1] increasing function F for the level 2 (E + k |Omega|) / |Omega|.
// The returned margin is conservative (the upper bisection end is used).
inline MeanConfinement mean_confinement_check(const std::vector<double>& means,
                                              double energy_bound,
                                              const PotentialSpec& pot,
                                              double area) {
  const double k = coercivity_shift(pot);
  const double level = std::max(0.0, 2.0 * (energy_bound + k * area) / area);
  double lo = 0.0, hi = 1.0;
  if (eval_F(pot, 1.0) <= level) {
    lo = 1.0;  // the bound does not bite inside [0, 1]
  } else {
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (eval_F(pot, mid) <= level) lo = mid;
      else hi = mid;
    }
  }
  MeanConfinement out;
  const double m_star = (lo == 1.0) ? 1.0 : hi;
  out.delta = 1.0 - m_star;
  out.ok = true;
  for (double m : means)
    if (!(std::abs(m) <= m_star)) out.ok = false;
  return out;
}

inline MeanConfinement mean_confinement_check(
    const std::vector<DiagnosticsRecord>& records, double energy_bound,
    const PotentialSpec& pot, double area) {
  std::vector<double> means;
  means.reserve(records.size());
  for (const auto& r : records) means.push_back(r.mean_phi);
  return mean_confinement_check(means, energy_bound, pot, area);
}

inline DiagnosticsRecord make_record(long step_idx, const SimState& prev,
                                     const SimState& next, double dt,
                                     const PotentialSpec& pot,
                                     const GammaSpec& gamma,
                                     const StepStats& stats) {
  DiagnosticsRecord r;
  r.step = step_idx;
  r.t = next.t;
  r.energy = bulk_energy(next.phi, pot);
  r.energy_residual = energy_budget(prev, next, dt, pot, gamma);
  r.mean_phi = mean(next.phi);
  r.min_phi = *std::min_element(next.phi.data.begin(), next.phi.data.end());
  r.max_phi = *std::max_element(next.phi.data.begin(), next.phi.data.end());
  const SeparationReport sep =
      separation_report(next.phi, pot.eps ? *pot.eps : 0.0);
  r.overshoot_plus = sep.overshoot_plus;
  r.overshoot_minus = sep.overshoot_minus;
  r.grad_excess = sep.grad_excess;
  const MassBalance mb = mass_balance(prev, next, dt, gamma);
  r.mass_residual = mb.mass_residual;
  r.boundary_transport = mb.boundary_transport;
  r.l2_u = l2norm(next.u);
  r.l2_grad_mu = h1seminorm(next.mu);
  r.newton_iters = stats.newton_iters;
  r.cg_iters = stats.cg_iters;
  r.dt_used = dt;
  return r;
}

// ---------------------------------------------------------------------------
// CSV serialization

inline const char* diagnostics_csv_header() {
  return "step,t,energy,energy_residual,mean_phi,min_phi,max_phi,"
         "overshoot_plus,overshoot_minus,grad_excess,mass_residual,"
         "boundary_transport,l2_u,l2_grad_mu,newton_iters,cg_iters,dt_used";
}

namespace detail {
inline std::string csv_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace detail

inline void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
  using detail::csv_double;
  os << r.step << ',' << csv_double(r.t) << ',' << csv_double(r.energy) << ','
     << csv_double(r.energy_residual) << ',' << csv_double(r.mean_phi) << ','
     << csv_double(r.min_phi) << ',' << csv_double(r.max_phi) << ','
     << csv_double(r.overshoot_plus) << ',' << csv_double(r.overshoot_minus)
     << ',' << csv_double(r.grad_excess) << ',' << csv_double(r.mass_residual)
     << ',' << csv_double(r.boundary_transport) << ',' << csv_double(r.l2_u)
     << ',' << csv_double(r.l2_grad_mu) << ',' << r.newton_iters << ','
     << r.cg_iters << ',' << csv_double(r.dt_used) << '\n';
}

}  // namespace chd
