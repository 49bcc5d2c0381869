#pragma once
// Time integrator for the coupled order-parameter / flow system
//
//   phi_t + A mu = (1 - phi)^+ S - u . grad phi
//   mu = A phi + f(phi) - lambda phi          (A = -laplacian, no-flux)
//   B p = S - div(mu grad phi)                (B = -laplacian, zero at walls)
//   u = -grad p + mu grad phi
//
// One step treats the convex part of the well implicitly and the -lambda phi
// part explicitly, freezes source and transport at the old level, and then
// rebuilds pressure and velocity from the new order parameter:
//
//   phi' + dt A(A phi' + f(phi') - lambda phi) = phi + dt [(1-phi)^+ S - u.grad phi]
//
// The implicit equation is solved by Newton.  Its Jacobian
// J = I + dt A (A + f') is nonsymmetric but self-adjoint in the inner
// product induced by M = A + f', so each update solves the SPD system
// (M + dt M A M) delta = -M G by preconditioned CG, with the constant mode
// (which A annihilates) eliminated exactly beforehand.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "chd/config.hpp"
#include "chd/elliptic.hpp"
#include "chd/grid.hpp"
#include "chd/potential.hpp"
#include "chd/source.hpp"

namespace chd {

struct SimState {
  double t = 0.0;
  ScalarField phi;  // order parameter, no-flux closure
  ScalarField mu;   // chemical potential, no-flux closure
  ScalarField p;    // pressure, zero-at-walls closure
  VectorField u;    // face velocity
};

struct StepStats {
  int newton_iters = 0;
  int cg_iters = 0;  // inner CG plus pressure solve
  double newton_residual = 0.0;
  double ratio_last = 0.0;  // contraction factors of the final two
  double ratio_prev = 0.0;  // Newton iterations (0 when fewer happened)
};

struct StepperConfig {
  double dt = 1e-3;
  double newton_tol = 1e-10;
  int newton_max = 50;
  double cg_tol = 1e-11;
  double cfl_safety = 0.5;
  double dt_min = 0.0;
  bool couple_flow = true;
};

inline StepperConfig make_stepper(const SimConfig& c) {
  StepperConfig s;
  s.dt = c.time.dt;
  s.newton_tol = c.solver.newton_tol;
  s.newton_max = c.solver.newton_max;
  s.cg_tol = c.solver.cg_tol;
  s.cfl_safety = c.solver.cfl_safety;
  s.dt_min = c.solver.dt_min > 0.0 ? c.solver.dt_min : c.time.dt / 1024.0;
  s.couple_flow = c.solver.couple_flow;
  return s;
}

struct NewtonDivergence : std::runtime_error {
  double t;
  double residual;
  int iterations;
  NewtonDivergence(double t_, double res, int iters)
      : std::runtime_error("newton diverged at t = " + std::to_string(t_) +
                           " (residual " + std::to_string(res) + " after " +
                           std::to_string(iters) + " iterations)"),
        t(t_), residual(res), iterations(iters) {}
};

struct CflViolation : std::runtime_error {
  double dt;
  double cap;
  CflViolation(double dt_, double cap_)
      : std::runtime_error("dt = " + std::to_string(dt_) +
                           " exceeds the transport stability cap " +
                           std::to_string(cap_)),
        dt(dt_), cap(cap_) {}
};

inline ScalarField chemical_potential(const ScalarField& phi,
                                      const PotentialSpec& pot) {
  ScalarField mu = laplacian(phi);
  for (std::size_t k = 0; k < mu.data.size(); ++k)
    mu.data[k] = -mu.data[k] + eval_f(pot, phi.data[k]) -
                 pot.lambda * phi.data[k];
  return mu;
}

// Pressure and velocity induced by the current phi, mu and source field.
struct FlowSolve {
  ScalarField p;
  VectorField u;
  int cg_iters = 0;
};

inline FlowSolve solve_flow(const ScalarField& phi, const ScalarField& mu,
                            const ScalarField& S, double cg_tol,
                            int max_iter = 4000) {
  const Grid& g = phi.grid;
  const VectorField w = face_multiply(mu, gradient(phi));
  const ScalarField divw = divergence(w, BcKind::DirichletZero);
  ScalarField rhs(g, BcKind::DirichletZero);
  for (std::size_t k = 0; k < rhs.data.size(); ++k)
    rhs.data[k] = S.data[k] - divw.data[k];
  FlowSolve out;
  out.p = solve_poisson_dirichlet(rhs, cg_tol, max_iter, &out.cg_iters);
  out.u = gradient(out.p);
  for (std::size_t k = 0; k < out.u.ux.size(); ++k)
    out.u.ux[k] = -out.u.ux[k] + w.ux[k];
  for (std::size_t k = 0; k < out.u.uy.size(); ++k)
    out.u.uy[k] = -out.u.uy[k] + w.uy[k];
  return out;
}

namespace detail {

struct NewtonOutcome {
  int iterations = 0;
  int cg_iterations = 0;
  double residual = 0.0;
  double ratio_last = 0.0;
  double ratio_prev = 0.0;
};

// Solves phi + dt A(A phi + f(phi) - lambda phi_n) = b in place.
inline NewtonOutcome newton_solve(ScalarField& phi, const ScalarField& phi_n,
                                  const ScalarField& b, const PotentialSpec& pot,
                                  double dt, const StepperConfig& cfg,
                                  double t_now) {
  const Grid& g = phi.grid;
  const double scale = std::max(1.0, l2norm(phi_n));
  const double tau = cfg.newton_tol * scale;
  // one extra iteration once tau is met keeps the defect far below every
  // downstream 10x-of-tolerance gate
  const double tau_polish = 1e-14 * scale;

  ScalarField G(g, BcKind::NeumannZero);
  const auto residual_of = [&](const ScalarField& ph) {
    ScalarField mt = laplacian(ph);
    for (std::size_t k = 0; k < mt.data.size(); ++k)
      mt.data[k] = -mt.data[k] + eval_f(pot, ph.data[k]) -
                   pot.lambda * phi_n.data[k];
    const ScalarField amt = laplacian(mt);
    for (std::size_t k = 0; k < G.data.size(); ++k)
      G.data[k] = ph.data[k] - dt * amt.data[k] - b.data[k];
    return l2norm(G);
  };

  NewtonOutcome out;
  double res = residual_of(phi);
  const double res0 = res;
  double prev1 = -1.0, prev2 = -1.0;
  bool polished = false;

  while (true) {
    if (!std::isfinite(res) || res > 1e3 * (res0 + scale))
      throw NewtonDivergence(t_now, res, out.iterations);
    if (res <= tau) {
      if (polished || res <= tau_polish) break;
      polished = true;
    }
    if (out.iterations >= cfg.newton_max)
      throw NewtonDivergence(t_now, res, out.iterations);

    ScalarField D(g, BcKind::NeumannZero);
    for (std::size_t k = 0; k < D.data.size(); ++k)
      D.data[k] = eval_fprime(pot, phi.data[k]);
    const double dbar = std::max(0.0, mean(D));

    // mean elimination: with delta = m + delta', A kills the constant and
    // J m = m + m dt A D, so m = mean(-G) and the remaining right-hand side
    // is zero-mean
    const double m = -mean(G);
    const ScalarField lapD = laplacian(D);
    ScalarField gt(g, BcKind::NeumannZero);
    for (std::size_t k = 0; k < gt.data.size(); ++k)
      gt.data[k] = -G.data[k] - m + m * dt * lapD.data[k];

    // symmetrized right-hand side P M gt
    ScalarField bb = laplacian(gt);
    for (std::size_t k = 0; k < bb.data.size(); ++k)
      bb.data[k] = -bb.data[k] + D.data[k] * gt.data[k];
    const double bbm = mean(bb);
    for (double& v : bb.data) v -= bbm;

    const auto apply_K = [&](const ScalarField& x, ScalarField& y) {
      ScalarField t1 = laplacian(x);
      for (std::size_t k = 0; k < t1.data.size(); ++k)
        t1.data[k] = -t1.data[k] + D.data[k] * x.data[k];
      ScalarField t2 = laplacian(t1);
      for (double& v : t2.data) v = -v;
      ScalarField t3 = laplacian(t2);
      for (std::size_t k = 0; k < y.data.size(); ++k)
        y.data[k] = t1.data[k] + dt * (-t3.data[k] + D.data[k] * t2.data[k]);
      const double ym = mean(y);
      for (double& v : y.data) v -= ym;
    };
    const auto precond = [&](const ScalarField& r, ScalarField& z) {
      z = r;
      spectral_filter(z, [&](double lam) {
        if (lam == 0.0) return 0.0;  // constants are handled exactly above
        const double mbar = lam + dbar;
        return 1.0 / (mbar * (1.0 + dt * lam * mbar));
      });
    };

    ScalarField delta(g, BcKind::NeumannZero, 0.0);
    const CgResult cg =
        pcg(apply_K, precond, bb, delta,
            cfg.cg_tol * std::max(1.0, l2norm(bb)), 2000);
    if (!cg.converged)
      throw NonConvergence("newton inner cg", cg.iterations, cg.residual);
    out.cg_iterations += cg.iterations;

    for (std::size_t k = 0; k < phi.data.size(); ++k)
      phi.data[k] += m + delta.data[k];
    ++out.iterations;
    prev2 = prev1;
    prev1 = res;
    res = residual_of(phi);
  }

  out.residual = res;
  if (prev1 > 0.0) out.ratio_last = res / prev1;
  if (prev1 > 0.0 && prev2 > 0.0) out.ratio_prev = prev1 / prev2;
  return out;
}

}  // namespace detail

inline SimState step(const SimState& s, const PotentialSpec& pot,
                     const GammaSpec& gamma, const StepperConfig& cfg,
                     double dt, StepStats* stats = nullptr) {
  const Grid& g = s.phi.grid;
  const double umax = std::max(linfnorm(s.u), 1e-12);
  const double cap = cfg.cfl_safety * std::min(g.hx(), g.hy()) / umax;
  if (dt > cap) throw CflViolation(dt, cap);

  const ScalarField Sn = source_S(gamma, s.phi, s.t);
  ScalarField R = effective_source(s.phi, Sn);
  if (cfg.couple_flow) {
    const ScalarField adv = cell_dot(s.u, gradient(s.phi));
    for (std::size_t k = 0; k < R.data.size(); ++k) R.data[k] -= adv.data[k];
  }
  ScalarField b = s.phi;
  for (std::size_t k = 0; k < b.data.size(); ++k) b.data[k] += dt * R.data[k];

  SimState next;
  next.t = s.t + dt;
  next.phi = s.phi;
  const auto outcome =
      detail::newton_solve(next.phi, s.phi, b, pot, dt, cfg, s.t);
  next.mu = chemical_potential(next.phi, pot);

  int flow_iters = 0;
  if (cfg.couple_flow) {
    const ScalarField Snew = source_S(gamma, next.phi, next.t);
    FlowSolve flow = solve_flow(next.phi, next.mu, Snew, cfg.cg_tol);
    next.p = std::move(flow.p);
    next.u = std::move(flow.u);
    flow_iters = flow.cg_iters;
  } else {
    next.p = ScalarField(g, BcKind::DirichletZero, 0.0);
    next.u = VectorField(g, 0.0);
  }

  if (stats) {
    stats->newton_iters = outcome.iterations;
    stats->cg_iters = outcome.cg_iterations + flow_iters;
    stats->newton_residual = outcome.residual;
    stats->ratio_last = outcome.ratio_last;
    stats->ratio_prev = outcome.ratio_prev;
  }
  return next;
}

// (Re)derives mu, p and u from the state's phi at its current time.
inline void finalize_state(SimState& s, const PotentialSpec& pot,
                           const GammaSpec& gamma, bool couple_flow,
                           double cg_tol) {
  s.mu = chemical_potential(s.phi, pot);
  if (couple_flow) {
    const ScalarField S = source_S(gamma, s.phi, s.t);
    FlowSolve flow = solve_flow(s.phi, s.mu, S, cg_tol);
    s.p = std::move(flow.p);
    s.u = std::move(flow.u);
  } else {
    s.p = ScalarField(s.phi.grid, BcKind::DirichletZero, 0.0);
    s.u = VectorField(s.phi.grid, 0.0);
  }
}

inline SimState initial_state(const SimConfig& c) {
  check_config(c);
  const Grid& g = c.grid;
  SimState s;
  s.t = 0.0;
  s.phi = ScalarField(g, BcKind::NeumannZero, c.initial.m0);

  switch (c.initial.kind) {
    case InitialKind::Constant:
      break;
    case InitialKind::Random: {
      std::mt19937_64 rng(c.initial.seed);
      std::uniform_real_distribution<double> noise(-1.0, 1.0);
      for (double& v : s.phi.data)
        v = c.initial.m0 + c.initial.amplitude * noise(rng);
      // pin the mean to m0; a couple of passes absorb the rounding of the
      // first correction
      for (int pass = 0; pass < 4; ++pass) {
        const double m = mean(s.phi);
        if (m == c.initial.m0) break;
        const double shift = c.initial.m0 - m;
        for (double& v : s.phi.data) v += shift;
      }
      break;
    }
    case InitialKind::Stripe: {
      const double w = g.ly / 16.0;
      for (int j = 0; j < g.ny; ++j) {
        const double v =
            c.initial.m0 +
            c.initial.amplitude * std::tanh((g.y(j) - 0.5 * g.ly) / w);
        for (int i = 0; i < g.nx; ++i) s.phi(i, j) = v;
      }
      break;
    }
    case InitialKind::Disk: {
      const double r0 = 0.25 * std::min(g.lx, g.ly);
      const double w = std::min(g.lx, g.ly) / 16.0;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const double dx = g.x(i) - 0.5 * g.lx, dy = g.y(j) - 0.5 * g.ly;
          const double dist = std::sqrt(dx * dx + dy * dy);
          s.phi(i, j) = c.initial.m0 +
                        c.initial.amplitude * std::tanh((r0 - dist) / w);
        }
      break;
    }
  }

  const PotentialSpec pot =
      make_potential(c.potential.family, c.potential.lambda, c.potential.eps);
  finalize_state(s, pot, c.gamma, c.solver.couple_flow, c.solver.cg_tol);
  return s;
}

}  // namespace chd
