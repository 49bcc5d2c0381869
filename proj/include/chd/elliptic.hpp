#pragma once
// Preconditioned conjugate gradients and the constant-coefficient spectral
// solves used to precondition them.
//
// The reflection closures in grid.hpp make the 5-point Laplacian diagonal in
// the DCT-II (even/Neumann) or DST-II (odd/Dirichlet) basis of cell-centered
// samples.  Applying the exact inverse of a constant-coefficient surrogate in
// that basis keeps CG iteration counts flat as the grid refines; the solves
// themselves remain CG with a residual-checked stopping test.

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <tuple>
#include <vector>

#include "chd/grid.hpp"

namespace chd {

namespace detail {

struct R2RPlans {
  double* buf = nullptr;
  fftw_plan fwd = nullptr, inv = nullptr;
};

// One cached in-place plan pair per (nx, ny, closure).  Plans live for the
// process; FFTW_ESTIMATE keeps planning deterministic.
inline R2RPlans& r2r_plans(const Grid& g, BcKind bc) {
  static std::map<std::tuple<int, int, BcKind>, R2RPlans> cache;
  const auto key = std::make_tuple(g.nx, g.ny, bc);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  R2RPlans p;
  p.buf = fftw_alloc_real(g.cells());
  const fftw_r2r_kind fk =
      (bc == BcKind::NeumannZero) ? FFTW_REDFT10 : FFTW_RODFT10;
  const fftw_r2r_kind ik =
      (bc == BcKind::NeumannZero) ? FFTW_REDFT01 : FFTW_RODFT01;
  p.fwd = fftw_plan_r2r_2d(g.ny, g.nx, p.buf, p.buf, fk, fk, FFTW_ESTIMATE);
  p.inv = fftw_plan_r2r_2d(g.ny, g.nx, p.buf, p.buf, ik, ik, FFTW_ESTIMATE);
  return cache.emplace(key, p).first->second;
}

// Eigenvalues of the 1D second-difference part of -laplacian under the
// matching reflection closure, one per transform mode.
inline std::vector<double> mode_eigenvalues(int n, double h, BcKind bc) {
  std::vector<double> lam(n);
  for (int k = 0; k < n; ++k) {
    const double theta = (bc == BcKind::NeumannZero)
                             ? std::numbers::pi * k / n
                             : std::numbers::pi * (k + 1) / n;
    lam[k] = (2.0 - 2.0 * std::cos(theta)) / (h * h);
  }
  return lam;
}

}  // namespace detail

// In place: f <- T^{-1} diag(factor(lambda)) T f, where T is the cosine or
// sine transform matching f's ghost rule and lambda runs over the eigenvalues
// of -laplacian for that closure.
template <class Factor>
void spectral_filter(ScalarField& f, Factor&& factor) {
  const Grid& g = f.grid;
  auto& plans = detail::r2r_plans(g, f.bc);
  const auto lx = detail::mode_eigenvalues(g.nx, g.hx(), f.bc);
  const auto ly = detail::mode_eigenvalues(g.ny, g.hy(), f.bc);
  const double norm = 1.0 / (4.0 * g.nx * g.ny);
  std::memcpy(plans.buf, f.data.data(), g.cells() * sizeof(double));
  fftw_execute(plans.fwd);
  for (int l = 0; l < g.ny; ++l)
    for (int k = 0; k < g.nx; ++k)
      plans.buf[std::size_t(l) * g.nx + k] *= norm * factor(lx[k] + ly[l]);
  fftw_execute(plans.inv);
  std::memcpy(f.data.data(), plans.buf, g.cells() * sizeof(double));
}

struct CgResult {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Standard PCG on ScalarField storage.  apply(in, out) must realize a
// symmetric positive definite operator and precond(in, out) an SPD
// approximate inverse; tol_abs is on the l2norm of the residual.
template <class Op, class Prec>
CgResult pcg(const Op& apply, const Prec& precond, const ScalarField& b,
             ScalarField& x, double tol_abs, int max_iter) {
  ScalarField r = b, z = b, p = b, q = b;
  apply(x, q);
  for (std::size_t k = 0; k < r.data.size(); ++k) r.data[k] -= q.data[k];
  CgResult res;
  res.residual = l2norm(r);
  if (res.residual <= tol_abs) {
    res.converged = true;
    return res;
  }
  precond(r, z);
  p = z;
  double rz = inner(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, q);
    const double pq = inner(p, q);
    if (!(pq > 0.0)) break;  // loss of positive definiteness; report as-is
    const double alpha = rz / pq;
    for (std::size_t k = 0; k < x.data.size(); ++k) {
      x.data[k] += alpha * p.data[k];
      r.data[k] -= alpha * q.data[k];
    }
    res.iterations = it;
    res.residual = l2norm(r);
    if (res.residual <= tol_abs) {
      res.converged = true;
      return res;
    }
    precond(r, z);
    const double rz_new = inner(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < p.data.size(); ++k)
      p.data[k] = z.data[k] + beta * p.data[k];
  }
  return res;
}

// Solves -laplacian(p) = rhs with homogeneous Dirichlet closure by CG,
// preconditioned with the exact sine-basis inverse.  The returned field
// satisfies l2norm(-laplacian(p) - rhs) <= tol * max(1, l2norm(rhs)).
inline ScalarField solve_poisson_dirichlet(const ScalarField& rhs, double tol,
                                           int max_iter, int* iters_out = nullptr) {
  ScalarField b = rhs;
  b.bc = BcKind::DirichletZero;
  ScalarField p(rhs.grid, BcKind::DirichletZero, 0.0);
  const auto apply = [](const ScalarField& in, ScalarField& out) {
    ScalarField lap = laplacian(in);
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] = -lap.data[k];
  };
  const auto precond = [](const ScalarField& in, ScalarField& out) {
    out = in;
    spectral_filter(out, [](double lam) { return 1.0 / lam; });
  };
  const double tol_abs = tol * std::max(1.0, l2norm(b));
  CgResult res = pcg(apply, precond, b, p, tol_abs, max_iter);
  if (iters_out) *iters_out = res.iterations;
  if (!res.converged)
    throw NonConvergence("solve_poisson_dirichlet", res.iterations, res.residual);
  return p;
}

}  // namespace chd
