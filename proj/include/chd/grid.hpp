#pragma once
// Uniform cell-centered 2D grid with reflection ghost cells and the discrete
// vector calculus built on it.
//
// Scalars live at cell centers x_i = (i + 1/2) hx, y_j = (j + 1/2) hy and
// carry their boundary closure with them: even reflection across each wall
// for NeumannZero, odd reflection for DirichletZero.  Vector fields live on
// cell faces (ux on the (nx+1) x ny x-faces, uy on the nx x (ny+1) y-faces).
// gradient() takes face differences and divergence() sums them back, so the
// two are exact negative adjoints and divergence(gradient(f)) reproduces the
// compact 5-point laplacian() identically.  All the conservation and energy
// bookkeeping downstream relies on that exactness, not on asymptotics.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chd {

enum class BcKind { NeumannZero, DirichletZero };

struct NonConvergence : std::runtime_error {
  std::string op;
  int iterations;
  double residual;
  NonConvergence(const std::string& op_, int iterations_, double residual_)
      : std::runtime_error(op_ + ": no convergence after " +
                           std::to_string(iterations_) +
                           " iterations, residual " + std::to_string(residual_)),
        op(op_), iterations(iterations_), residual(residual_) {}
};

struct Grid {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double cell_area() const { return hx() * hy(); }
  double area() const { return lx * ly; }
  std::size_t cells() const { return std::size_t(nx) * std::size_t(ny); }

  // cell-center coordinates
  double x(int i) const { return (i + 0.5) * hx(); }
  double y(int j) const { return (j + 0.5) * hy(); }

  bool operator==(const Grid&) const = default;
};

inline void check_grid(const Grid& g) {
  if (g.nx < 4 || g.ny < 4)
    throw std::invalid_argument("grid: nx and ny must be >= 4");
  if (!(g.lx > 0.0) || !(g.ly > 0.0))
    throw std::invalid_argument("grid: lx and ly must be positive");
}

struct ScalarField {
  Grid grid;
  BcKind bc = BcKind::NeumannZero;
  std::vector<double> data;  // row-major, index i + nx*j

  ScalarField() = default;
  ScalarField(const Grid& g, BcKind b, double fill = 0.0)
      : grid(g), bc(b), data(g.cells(), fill) {
    check_grid(g);
  }

  double& operator()(int i, int j) { return data[std::size_t(j) * grid.nx + i]; }
  double operator()(int i, int j) const { return data[std::size_t(j) * grid.nx + i]; }

  // Value extended one cell past each wall by the field's reflection rule.
  double ghost(int i, int j) const {
    double s = 1.0;
    const double odd = (bc == BcKind::DirichletZero) ? -1.0 : 1.0;
    if (i < 0) { i = 0; s *= odd; }
    else if (i >= grid.nx) { i = grid.nx - 1; s *= odd; }
    if (j < 0) { j = 0; s *= odd; }
    else if (j >= grid.ny) { j = grid.ny - 1; s *= odd; }
    return s * (*this)(i, j);
  }
};

struct VectorField {
  Grid grid;
  std::vector<double> ux;  // (nx+1)*ny, face (I, j) sits at x = I*hx
  std::vector<double> uy;  // nx*(ny+1), face (i, J) sits at y = J*hy

  VectorField() = default;
  explicit VectorField(const Grid& g, double fill = 0.0)
      : grid(g),
        ux(std::size_t(g.nx + 1) * g.ny, fill),
        uy(std::size_t(g.nx) * (g.ny + 1), fill) {
    check_grid(g);
  }

  double& x(int I, int j) { return ux[std::size_t(j) * (grid.nx + 1) + I]; }
  double x(int I, int j) const { return ux[std::size_t(j) * (grid.nx + 1) + I]; }
  double& y(int i, int J) { return uy[std::size_t(J) * grid.nx + i]; }
  double y(int i, int J) const { return uy[std::size_t(J) * grid.nx + i]; }
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* op) {
  if (!(a == b)) throw std::invalid_argument(std::string(op) + ": grid mismatch");
}

// ---------------------------------------------------------------------------
// Differential operators

// Compact 5-point Laplacian closed with the field's reflection ghosts.
inline ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid;
  ScalarField out(g, f.bc);
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double c = f(i, j);
      // neighbors are summed first so the stencil commutes with mirroring
      // exactly, not just to rounding
      out(i, j) = ax * ((f.ghost(i + 1, j) + f.ghost(i - 1, j)) - 2.0 * c) +
                  ay * ((f.ghost(i, j + 1) + f.ghost(i, j - 1)) - 2.0 * c);
    }
  return out;
}

// Face differences; boundary faces are closed by the same ghosts as
// laplacian(), so divergence(gradient(f)) == laplacian(f) holds exactly.
inline VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid;
  VectorField v(g);
  const double ix = 1.0 / g.hx();
  const double iy = 1.0 / g.hy();
  for (int j = 0; j < g.ny; ++j)
    for (int I = 0; I <= g.nx; ++I)
      v.x(I, j) = ix * (f.ghost(I, j) - f.ghost(I - 1, j));
  for (int J = 0; J <= g.ny; ++J)
    for (int i = 0; i < g.nx; ++i)
      v.y(i, J) = iy * (f.ghost(i, J) - f.ghost(i, J - 1));
  return v;
}

// Face sums back to cell centers; bc tags the resulting scalar field.
inline ScalarField divergence(const VectorField& v, BcKind bc) {
  const Grid& g = v.grid;
  ScalarField out(g, bc);
  const double ix = 1.0 / g.hx();
  const double iy = 1.0 / g.hy();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = ix * (v.x(i + 1, j) - v.x(i, j)) +
                  iy * (v.y(i, j + 1) - v.y(i, j));
  return out;
}

// ---------------------------------------------------------------------------
// Reductions and norms.  Cell quadrature weight is hx*hy; face quadrature
// gives boundary faces half weight, which is exactly what makes
// h1seminorm(f)^2 == inner(-laplacian(f), f) and the summation-by-parts
// identities hold with no remainder.

inline double mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.data) s += v;
  return s / double(f.grid.cells());
}

inline double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid, g.grid, "inner");
  double s = 0.0;
  for (std::size_t k = 0; k < f.data.size(); ++k) s += f.data[k] * g.data[k];
  return s * f.grid.cell_area();
}

inline double l2norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

inline double linfnorm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

inline double face_inner(const VectorField& v, const VectorField& w) {
  require_same_grid(v.grid, w.grid, "face_inner");
  const Grid& g = v.grid;
  const double da = g.cell_area();
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int I = 0; I <= g.nx; ++I) {
      const double wgt = (I == 0 || I == g.nx) ? 0.5 : 1.0;
      s += wgt * v.x(I, j) * w.x(I, j);
    }
  for (int J = 0; J <= g.ny; ++J)
    for (int i = 0; i < g.nx; ++i) {
      const double wgt = (J == 0 || J == g.ny) ? 0.5 : 1.0;
      s += wgt * v.y(i, J) * w.y(i, J);
    }
  return s * da;
}

inline double l2norm(const VectorField& v) { return std::sqrt(face_inner(v, v)); }

inline double linfnorm(const VectorField& v) {
  double m = 0.0;
  for (double x : v.ux) m = std::max(m, std::abs(x));
  for (double y : v.uy) m = std::max(m, std::abs(y));
  return m;
}

inline double h1seminorm(const ScalarField& f) {
  return l2norm(gradient(f));
}

inline double h1norm(const ScalarField& f) {
  const double a = l2norm(f), b = h1seminorm(f);
  return std::sqrt(a * a + b * b);
}

// ---------------------------------------------------------------------------
// Face products and advective terms

// Face field f*v with f averaged to interior faces and extrapolated
// one-sidedly (linear) to boundary faces.
inline VectorField face_multiply(const ScalarField& f, const VectorField& v) {
  require_same_grid(f.grid, v.grid, "face_multiply");
  const Grid& g = f.grid;
  VectorField w(g);
  for (int j = 0; j < g.ny; ++j) {
    w.x(0, j) = (1.5 * f(0, j) - 0.5 * f(1, j)) * v.x(0, j);
    for (int I = 1; I < g.nx; ++I)
      w.x(I, j) = 0.5 * (f(I - 1, j) + f(I, j)) * v.x(I, j);
    w.x(g.nx, j) = (1.5 * f(g.nx - 1, j) - 0.5 * f(g.nx - 2, j)) * v.x(g.nx, j);
  }
  for (int i = 0; i < g.nx; ++i) {
    w.y(i, 0) = (1.5 * f(i, 0) - 0.5 * f(i, 1)) * v.y(i, 0);
    for (int J = 1; J < g.ny; ++J)
      w.y(i, J) = 0.5 * (f(i, J - 1) + f(i, J)) * v.y(i, J);
    w.y(i, g.ny) = (1.5 * f(i, g.ny - 1) - 0.5 * f(i, g.ny - 2)) * v.y(i, g.ny);
  }
  return w;
}

// v.w sampled at cell centers by averaging the two adjacent face products
// in each direction.
inline ScalarField cell_dot(const VectorField& v, const VectorField& w) {
  require_same_grid(v.grid, w.grid, "cell_dot");
  const Grid& g = v.grid;
  ScalarField out(g, BcKind::NeumannZero);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = 0.5 * (v.x(i, j) * w.x(i, j) + v.x(i + 1, j) * w.x(i + 1, j)) +
                  0.5 * (v.y(i, j) * w.y(i, j) + v.y(i, j + 1) * w.y(i, j + 1));
  return out;
}

// |v|^2 sampled at cell centers (same face averaging as cell_dot).
inline ScalarField cell_speed2(const VectorField& v) { return cell_dot(v, v); }

// Outward flux of f*v through the domain boundary, with f extrapolated to
// the boundary faces by the same one-sided rule as face_multiply, so that
//   sum divergence(face_multiply(f, v)) * hx * hy == boundary_flux(f, v)
// exactly (the interior face contributions telescope away).
inline double boundary_flux(const ScalarField& f, const VectorField& v) {
  require_same_grid(f.grid, v.grid, "boundary_flux");
  const Grid& g = f.grid;
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    s += (1.5 * f(g.nx - 1, j) - 0.5 * f(g.nx - 2, j)) * v.x(g.nx, j) * g.hy();
    s -= (1.5 * f(0, j) - 0.5 * f(1, j)) * v.x(0, j) * g.hy();
  }
  for (int i = 0; i < g.nx; ++i) {
    s += (1.5 * f(i, g.ny - 1) - 0.5 * f(i, g.ny - 2)) * v.y(i, g.ny) * g.hx();
    s -= (1.5 * f(i, 0) - 0.5 * f(i, 1)) * v.y(i, 0) * g.hx();
  }
  return s;
}

}  // namespace chd
