#pragma once
// Independent reference solutions used to cross-check the simulator.
//
//  * homogeneous_exact: spatially uniform states obey phi' = -(1-phi^2) gamma0
//    (for |phi| < 1 the truncations are inactive), solved in closed form.
//  * toy_mean_exact: linear relaxation m' = sbar - K m, closed form.
//  * dispersion_rate: growth rate of a small cosine perturbation around
//    phi = 0 under the linearized decoupled dynamics, with f'(0) = 2.
//  * dense 4x4 integrator: the full coupled scheme re-implemented with dense
//    matrices and LU solves, sharing only the potential evaluations with the
//    production path.  The constant-gamma taper is inlined on purpose.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "chd/potential.hpp"

namespace chd {

inline double homogeneous_exact(double phi0, double gamma0, double t) {
  if (!(std::abs(phi0) < 1.0))
    throw DomainError("homogeneous_exact: |phi0| must be < 1");
  return std::tanh(std::atanh(phi0) - gamma0 * t);
}

inline double toy_mean_exact(double m0, double K, double sbar, double t) {
  if (!(K > 0.0))
    throw std::invalid_argument("toy_mean_exact: K must be > 0");
  const double m_inf = sbar / K;
  return m_inf + (m0 - m_inf) * std::exp(-K * t);
}

inline double dispersion_rate(double kappa, double lambda) {
  if (!(kappa >= 0.0))
    throw std::invalid_argument("dispersion_rate: kappa must be >= 0");
  const double k2 = kappa * kappa;
  return -k2 * k2 + (lambda - 2.0) * k2;
}

// ---------------------------------------------------------------------------
// Dense reference integrator on a fixed 4x4 grid.

namespace dense {

constexpr int N = 4;
constexpr int M = N * N;

using Vec = std::array<double, M>;
using Mat = std::array<std::array<double, M>, M>;
using FaceX = std::array<double, (N + 1) * N>;  // [j*(N+1) + I]
using FaceY = std::array<double, N * (N + 1)>;  // [J*N + i]

struct State {
  double t = 0.0;
  Vec phi{}, mu{}, p{};
  FaceX ux{};
  FaceY uy{};
};

inline int id(int i, int j) { return j * N + i; }

// -laplacian with mirror ghosts: sigma = +1 even reflection, -1 odd.
inline Mat neg_laplacian_matrix(double lx, double ly, double sigma) {
  const double hx = lx / N, hy = ly / N;
  const double ax = 1.0 / (hx * hx), ay = 1.0 / (hy * hy);
  Mat A{};
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      const int r = id(i, j);
      if (i + 1 < N) { A[r][r] += ax; A[r][id(i + 1, j)] -= ax; }
      else A[r][r] += (1.0 - sigma) * ax;
      if (i - 1 >= 0) { A[r][r] += ax; A[r][id(i - 1, j)] -= ax; }
      else A[r][r] += (1.0 - sigma) * ax;
      if (j + 1 < N) { A[r][r] += ay; A[r][id(i, j + 1)] -= ay; }
      else A[r][r] += (1.0 - sigma) * ay;
      if (j - 1 >= 0) { A[r][r] += ay; A[r][id(i, j - 1)] -= ay; }
      else A[r][r] += (1.0 - sigma) * ay;
    }
  return A;
}

inline Vec matvec(const Mat& A, const Vec& x) {
  Vec y{};
  for (int r = 0; r < M; ++r) {
    double s = 0.0;
    for (int c = 0; c < M; ++c) s += A[r][c] * x[c];
    y[r] = s;
  }
  return y;
}

inline Vec lu_solve(Mat A, Vec b) {
  std::array<int, M> piv{};
  for (int k = 0; k < M; ++k) {
    int p = k;
    for (int r = k + 1; r < M; ++r)
      if (std::abs(A[r][k]) > std::abs(A[p][k])) p = r;
    piv[k] = p;
    if (p != k) std::swap(A[p], A[k]);
    if (A[k][k] == 0.0)
      throw std::runtime_error("dense lu_solve: singular matrix");
    for (int r = k + 1; r < M; ++r) {
      const double m = A[r][k] / A[k][k];
      A[r][k] = m;
      for (int c = k + 1; c < M; ++c) A[r][c] -= m * A[k][c];
    }
  }
  for (int k = 0; k < M; ++k) {
    if (piv[k] != k) std::swap(b[piv[k]], b[k]);
    for (int r = k + 1; r < M; ++r) b[r] -= A[r][k] * b[k];
  }
  for (int r = M - 1; r >= 0; --r) {
    for (int c = r + 1; c < M; ++c) b[r] -= A[r][c] * b[c];
    b[r] /= A[r][r];
  }
  return b;
}

inline void face_gradient(const Vec& f, double lx, double ly, double sigma,
                          FaceX& gx, FaceY& gy) {
  const double hx = lx / N, hy = ly / N;
  for (int j = 0; j < N; ++j)
    for (int I = 0; I <= N; ++I) {
      const double left = (I == 0) ? sigma * f[id(0, j)] : f[id(I - 1, j)];
      const double right = (I == N) ? sigma * f[id(N - 1, j)] : f[id(I, j)];
      gx[j * (N + 1) + I] = (right - left) / hx;
    }
  for (int J = 0; J <= N; ++J)
    for (int i = 0; i < N; ++i) {
      const double lo = (J == 0) ? sigma * f[id(i, 0)] : f[id(i, J - 1)];
      const double hi = (J == N) ? sigma * f[id(i, N - 1)] : f[id(i, J)];
      gy[J * N + i] = (hi - lo) / hy;
    }
}

inline Vec face_divergence(const FaceX& vx, const FaceY& vy, double lx,
                           double ly) {
  const double hx = lx / N, hy = ly / N;
  Vec out{};
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i)
      out[id(i, j)] = (vx[j * (N + 1) + i + 1] - vx[j * (N + 1) + i]) / hx +
                      (vy[(j + 1) * N + i] - vy[j * N + i]) / hy;
  return out;
}

// cell value at faces: centered average inside, one-sided extrapolation at
// the walls (same rule as the production face_multiply)
inline void face_scale(const Vec& f, FaceX& vx, FaceY& vy) {
  for (int j = 0; j < N; ++j)
    for (int I = 0; I <= N; ++I) {
      double fv;
      if (I == 0) fv = 1.5 * f[id(0, j)] - 0.5 * f[id(1, j)];
      else if (I == N) fv = 1.5 * f[id(N - 1, j)] - 0.5 * f[id(N - 2, j)];
      else fv = 0.5 * (f[id(I - 1, j)] + f[id(I, j)]);
      vx[j * (N + 1) + I] *= fv;
    }
  for (int J = 0; J <= N; ++J)
    for (int i = 0; i < N; ++i) {
      double fv;
      if (J == 0) fv = 1.5 * f[id(i, 0)] - 0.5 * f[id(i, 1)];
      else if (J == N) fv = 1.5 * f[id(i, N - 1)] - 0.5 * f[id(i, N - 2)];
      else fv = 0.5 * (f[id(i, J - 1)] + f[id(i, J)]);
      vy[J * N + i] *= fv;
    }
}

inline Vec cell_dot_faces(const FaceX& ax, const FaceY& ay, const FaceX& bx,
                          const FaceY& by) {
  Vec out{};
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i)
      out[id(i, j)] =
          0.5 * (ax[j * (N + 1) + i] * bx[j * (N + 1) + i] +
                 ax[j * (N + 1) + i + 1] * bx[j * (N + 1) + i + 1]) +
          0.5 * (ay[j * N + i] * by[j * N + i] +
                 ay[(j + 1) * N + i] * by[(j + 1) * N + i]);
  return out;
}

inline double constant_gamma(double gamma0, double r) {
  const double chi = std::clamp((2.0 - std::abs(r)) / 0.5, 0.0, 1.0);
  return gamma0 * chi;
}

inline Vec chemical_potential_vec(const Vec& phi, const Mat& A,
                                  const PotentialSpec& pot) {
  Vec mu = matvec(A, phi);
  for (int k = 0; k < M; ++k)
    mu[k] += eval_f(pot, phi[k]) - pot.lambda * phi[k];
  return mu;
}

inline void flow_from(const Vec& phi, const Vec& mu, double t, double lx,
                      double ly, const PotentialSpec& pot, double gamma0,
                      const Mat& B, Vec& p, FaceX& ux, FaceY& uy) {
  (void)t;
  FaceX wx;
  FaceY wy;
  face_gradient(phi, lx, ly, 1.0, wx, wy);
  face_scale(mu, wx, wy);
  Vec rhs = face_divergence(wx, wy, lx, ly);
  for (int k = 0; k < M; ++k) {
    const double S = -std::max(1.0 + phi[k], 0.0) * constant_gamma(gamma0, phi[k]);
    rhs[k] = S - rhs[k];
  }
  p = lu_solve(B, rhs);
  FaceX gpx;
  FaceY gpy;
  face_gradient(p, lx, ly, -1.0, gpx, gpy);
  for (std::size_t k = 0; k < ux.size(); ++k) ux[k] = -gpx[k] + wx[k];
  for (std::size_t k = 0; k < uy.size(); ++k) uy[k] = -gpy[k] + wy[k];
}

}  // namespace dense

inline dense::State dense_initial(const dense::Vec& phi0, double lx, double ly,
                                  const PotentialSpec& pot, double gamma0,
                                  bool couple_flow) {
  using namespace dense;
  const Mat A = neg_laplacian_matrix(lx, ly, 1.0);
  State s;
  s.phi = phi0;
  s.mu = chemical_potential_vec(phi0, A, pot);
  if (couple_flow) {
    const Mat B = neg_laplacian_matrix(lx, ly, -1.0);
    flow_from(s.phi, s.mu, 0.0, lx, ly, pot, gamma0, B, s.p, s.ux, s.uy);
  }
  return s;
}

inline dense::State dense_step(const dense::State& prev, double lx, double ly,
                               const PotentialSpec& pot, double gamma0,
                               double dt, bool couple_flow) {
  using namespace dense;
  const Mat A = neg_laplacian_matrix(lx, ly, 1.0);
  const double h2 = (lx / N) * (ly / N);

  Vec b{};
  {
    FaceX gpx;
    FaceY gpy;
    face_gradient(prev.phi, lx, ly, 1.0, gpx, gpy);
    const Vec adv = cell_dot_faces(prev.ux, prev.uy, gpx, gpy);
    for (int k = 0; k < M; ++k) {
      const double S =
          -std::max(1.0 + prev.phi[k], 0.0) * constant_gamma(gamma0, prev.phi[k]);
      const double R =
          std::max(1.0 - prev.phi[k], 0.0) * S - (couple_flow ? adv[k] : 0.0);
      b[k] = prev.phi[k] + dt * R;
    }
  }

  double scale = 0.0;
  for (int k = 0; k < M; ++k) scale += prev.phi[k] * prev.phi[k] * h2;
  scale = std::max(1.0, std::sqrt(scale));

  Vec phi = prev.phi;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    Vec mt = chemical_potential_vec(phi, A, pot);
    for (int k = 0; k < M; ++k)
      mt[k] += pot.lambda * (phi[k] - prev.phi[k]);  // explicit -lambda phi^n
    Vec G = matvec(A, mt);
    double res = 0.0;
    for (int k = 0; k < M; ++k) {
      G[k] = phi[k] + dt * G[k] - b[k];
      res += G[k] * G[k] * h2;
    }
    res = std::sqrt(res);
    if (res <= 1e-14 * scale) break;
    if (it >= 8 && res > 0.25 * best) break;  // rounding floor reached
    best = std::min(best, res);
    Mat J{};
    for (int r = 0; r < M; ++r) {
      for (int c = 0; c < M; ++c) {
        double a2 = 0.0;
        for (int k = 0; k < M; ++k) a2 += A[r][k] * A[k][c];
        J[r][c] = dt * (a2 + A[r][c] * eval_fprime(pot, phi[c]));
      }
      J[r][r] += 1.0;
    }
    Vec g = G;
    for (int k = 0; k < M; ++k) g[k] = -g[k];
    const Vec delta = lu_solve(J, g);
    for (int k = 0; k < M; ++k) phi[k] += delta[k];
  }

  State next;
  next.t = prev.t + dt;
  next.phi = phi;
  next.mu = chemical_potential_vec(phi, A, pot);
  if (couple_flow) {
    const Mat B = neg_laplacian_matrix(lx, ly, -1.0);
    flow_from(next.phi, next.mu, next.t, lx, ly, pot, gamma0, B, next.p,
              next.ux, next.uy);
  }
  return next;
}

}  // namespace chd
