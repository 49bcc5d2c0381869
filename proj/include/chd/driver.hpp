#pragma once
// Time-marching loop with step rejection, and the perturbation-growth
// experiment built on top of it.
//
// A step that trips the CFL guard or fails to converge is retried with the
// step size halved; after ten consecutive accepted steps the size doubles
// back toward the configured value.  Halving below dt_min rethrows, so a
// genuinely sick run still fails loudly instead of stalling.

#include <cmath>
#include <functional>
#include <vector>

#include "chd/config.hpp"
#include "chd/diagnostics.hpp"
#include "chd/solver.hpp"

namespace chd {

using DiagnosticsHook =
    std::function<void(const DiagnosticsRecord&, const SimState&)>;

struct RunResult {
  SimState state;
  long steps = 0;
  long rejected = 0;
};

inline RunResult run(SimState state, double t_end, const PotentialSpec& pot,
                     const GammaSpec& gamma, const StepperConfig& cfg,
                     const DiagnosticsHook& hook = {}) {
  RunResult out{std::move(state), 0, 0};
  double dt_cur = cfg.dt;
  int clean = 0;
  while (out.state.t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    const double dt_try = std::min(dt_cur, t_end - out.state.t);
    SimState next;
    StepStats stats;
    try {
      next = step(out.state, pot, gamma, cfg, dt_try, &stats);
    } catch (const CflViolation&) {
      if (0.5 * dt_cur < cfg.dt_min) throw;
      dt_cur *= 0.5;
      clean = 0;
      ++out.rejected;
      continue;
    } catch (const NewtonDivergence&) {
      if (0.5 * dt_cur < cfg.dt_min) throw;
      dt_cur *= 0.5;
      clean = 0;
      ++out.rejected;
      continue;
    } catch (const NonConvergence&) {
      if (0.5 * dt_cur < cfg.dt_min) throw;
      dt_cur *= 0.5;
      clean = 0;
      ++out.rejected;
      continue;
    }
    ++out.steps;
    if (hook) {
      const DiagnosticsRecord rec =
          make_record(out.steps, out.state, next, dt_try, pot, gamma, stats);
      hook(rec, next);
    }
    out.state = std::move(next);
    if (++clean >= 10 && dt_cur < cfg.dt) {
      dt_cur = std::min(2.0 * dt_cur, cfg.dt);
      clean = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Perturbation growth

struct GrowthRow {
  double t = 0.0;
  double diff = 0.0;
  double ratio = 0.0;
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  double lambda_fit = 0.0;
};

// March the configured run and a copy whose initial datum is nudged by
// delta0 along a fixed smooth profile, in lockstep at the configured step
// size, and record the H1 distance between them.  lambda_fit is the largest
// observed exponential rate ln(diff / delta0) / t; a bound on it uniform in
// delta0 is the practical face of well-posedness.
inline GrowthTable continuous_dependence_experiment(const SimConfig& config,
                                                    double delta0) {
  const PotentialSpec pot =
      make_potential(config.potential.family, config.potential.lambda,
                     config.potential.eps);
  const StepperConfig cfg = make_stepper(config);

  SimState a = initial_state(config);
  SimState b = a;
  {
    ScalarField psi(a.phi.grid, BcKind::NeumannZero);
    const Grid& g = psi.grid;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        psi(i, j) = std::cos(M_PI * g.x(i) / g.lx) *
                    std::cos(M_PI * g.y(j) / g.ly);
    const double nrm = h1norm(psi);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        b.phi(i, j) += delta0 * psi(i, j) / nrm;
  }
  finalize_state(b, pot, config.gamma, cfg.couple_flow, cfg.cg_tol);

  GrowthTable out;
  ScalarField d = a.phi;
  for (std::size_t k = 0; k < d.data.size(); ++k) d.data[k] -= b.phi.data[k];
  out.rows.push_back({0.0, h1norm(d), delta0 > 0.0 ? h1norm(d) / delta0 : 0.0});

  const long n_steps =
      static_cast<long>(std::llround(config.time.t_end / cfg.dt));
  for (long s = 0; s < n_steps; ++s) {
    a = step(a, pot, config.gamma, cfg, cfg.dt);
    b = step(b, pot, config.gamma, cfg, cfg.dt);
    for (std::size_t k = 0; k < d.data.size(); ++k)
      d.data[k] = a.phi.data[k] - b.phi.data[k];
    const double diff = h1norm(d);
    out.rows.push_back({a.t, diff, delta0 > 0.0 ? diff / delta0 : 0.0});
  }
  for (const GrowthRow& r : out.rows)
    if (r.t > 0.0)
      out.lambda_fit = std::max(
          out.lambda_fit, std::log(std::max(r.ratio, 1e-300)) / r.t);
  return out;
}

}  // namespace chd
