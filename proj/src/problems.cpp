#include "ebk/problems.hpp"

#include <cmath>
#include <ostream>

#include "ebk/errors.hpp"

namespace ebk {

// ---------------------------------------------------------------- Burgers

SparseMatrix BurgersProblem::convection(const Vector& y) const {
  // Row i couples (i-1, i+1) with weights +-(y_i + y_{i+-1})/(6 dx), the
  // skew-symmetric form of (1/3) u u_x + (2/3) (u^2/2)_x.
  std::vector<Triplet> t;
  t.reserve(2 * n);
  const double s = 1.0 / (6.0 * dx);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) t.push_back({i, i + 1, (y(i) + y(i + 1)) * s});
    if (i > 0) t.push_back({i, i - 1, -(y(i) + y(i - 1)) * s});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

Vector BurgersProblem::initial() const {
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 1) * dx;
    v(i) = 1.5 * x * (1.0 - x) * (1.0 - x);
  }
  return v;
}

SplitOde BurgersProblem::ode() const {
  SplitOde o;
  o.dim = n;
  o.initial = initial();
  o.horizon = horizon;
  o.name = "burgers";
  const BurgersProblem p = *this;
  o.linear_part = [p](const Vector& anchor) {
    return p.diffusion.plus(p.convection(anchor));
  };
  o.remainder = [p](const Vector& y, const Vector& anchor) {
    return p.convection(anchor).apply(y) - p.convection(y).apply(y);
  };
  o.rhs = [p](double, const Vector& y) {
    return Vector(-p.diffusion.apply(y) - p.convection(y).apply(y));
  };
  o.rhs_jacobian = [p](double, const Vector& y) {
    std::vector<Triplet> t;
    t.reserve(3 * p.n);
    const double s = 1.0 / (6.0 * p.dx);
    for (int i = 0; i < p.n; ++i) {
      const double up = i + 1 < p.n ? y(i + 1) : 0.0;
      const double dn = i > 0 ? y(i - 1) : 0.0;
      t.push_back({i, i, (up - dn) * s});
      if (i + 1 < p.n) t.push_back({i, i + 1, (y(i) + 2.0 * up) * s});
      if (i > 0) t.push_back({i, i - 1, -(y(i) + 2.0 * dn) * s});
    }
    auto jc = SparseMatrix::from_triplets(p.n, p.n, std::move(t));
    return p.diffusion.plus(jc).scaled(-1.0);
  };
  o.residual_final = [p](const Vector& y_next, const Vector&, const Vector& anchor) {
    return Vector(p.convection(anchor).apply(y_next) -
                  p.convection(y_next).apply(y_next));
  };
  return o;
}

void BurgersProblem::write_snapshot(std::ostream& os, const Vector& state) const {
  os.precision(12);
  for (int i = 0; i < n; ++i) os << (i + 1) * dx << " " << state(i) << "\n";
}

BurgersProblem burgers_build(int n, double viscosity, double horizon) {
  if (n < 3) throw std::invalid_argument("burgers_build: need n >= 3");
  if (!(viscosity > 0.0)) throw std::invalid_argument("burgers_build: viscosity > 0");
  BurgersProblem p;
  p.n = n;
  p.viscosity = viscosity;
  p.horizon = horizon;
  p.dx = 1.0 / (n + 1);
  const double w = viscosity / (p.dx * p.dx);
  std::vector<Triplet> t;
  t.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0 * w});
    if (i > 0) t.push_back({i, i - 1, -w});
    if (i + 1 < n) t.push_back({i, i + 1, -w});
  }
  p.diffusion = SparseMatrix::from_triplets(n, n, std::move(t));
  return p;
}

// ------------------------------------------------------------------ Bratu

namespace {

inline double gauss3(double dx, double dy, double dz) {
  return std::exp(-100.0 * (dx * dx + dy * dy + dz * dz));
}

}  // namespace

Vector BratuProblem::reaction(const Vector& y) const {
  return reaction_constant * y.array().exp();
}

Vector BratuProblem::reaction_jacobian(const Vector& y) const {
  return reaction_constant * y.array().exp();
}

Vector BratuProblem::source(double t) const {
  const double x0 = 0.5 + 0.3 * std::cos(2000.0 * M_PI * t);
  const double y0 = 0.5 + 0.3 * std::sin(2000.0 * M_PI * t);
  const bool with_initial_term = t <= 5e-5;
  Vector g(n * n * n);
  int idx = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i, ++idx) {
        const double x = (i + 1) * h, y = (j + 1) * h, z = (k + 1) * h;
        double v = gauss3(x - x0, y - y0, z - 0.5);
        if (with_initial_term)
          v += reaction_constant * gauss3(x - 0.2, y - 0.4, z - 0.5);
        g(idx) = v;
      }
  return g;
}

Vector BratuProblem::initial() const {
  Vector v(n * n * n);
  int idx = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i, ++idx)
        v(idx) = gauss3((i + 1) * h - 0.2, (j + 1) * h - 0.4, (k + 1) * h - 0.5);
  return v;
}

SplitOde BratuProblem::ode() const {
  SplitOde o;
  o.dim = n * n * n;
  o.initial = initial();
  o.horizon = horizon;
  o.name = "bratu";
  const BratuProblem p = *this;
  o.linear_part = [p](const Vector& anchor) {
    return p.diffusion.plus_diagonal(p.reaction_jacobian(anchor), -1.0);
  };
  o.remainder = [p](const Vector& y, const Vector& anchor) {
    return Vector(p.reaction(y) -
                  (p.reaction_jacobian(anchor).array() * y.array()).matrix());
  };
  o.forcing = [p](double t) { return p.source(t); };
  o.rhs = [p](double t, const Vector& y) {
    return Vector(-p.diffusion.apply(y) + p.reaction(y) + p.source(t));
  };
  o.rhs_jacobian = [p](double, const Vector& y) {
    return p.diffusion.scaled(-1.0).plus_diagonal(p.reaction_jacobian(y), 1.0);
  };
  o.residual_final = [p](const Vector& y_next, const Vector& y_curr,
                         const Vector& anchor) {
    return Vector(p.reaction(y_next) - p.reaction(y_curr) -
                  (p.reaction_jacobian(anchor).array() * (y_next - y_curr).array())
                      .matrix());
  };
  return o;
}

void BratuProblem::write_snapshot(std::ostream& os, const Vector& state) const {
  os.precision(12);
  int idx = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i, ++idx)
        os << (i + 1) * h << " " << (j + 1) * h << " " << (k + 1) * h << " "
           << state(idx) << "\n";
}

BratuProblem bratu_build(int n, double horizon) {
  if (n < 4) throw std::invalid_argument("bratu_build: need n >= 4");
  BratuProblem p;
  p.n = n;
  p.horizon = horizon;
  p.h = 1.0 / (n + 1);
  const double wx = 1e4 / (p.h * p.h);
  const double wy = 1e2 / (p.h * p.h);
  const double wz = 1.0 / (p.h * p.h);
  const int nn = n * n * n;
  std::vector<Triplet> t;
  t.reserve(7 * nn);
  int idx = 0;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i, ++idx) {
        t.push_back({idx, idx, 2.0 * (wx + wy + wz)});
        if (i > 0) t.push_back({idx, idx - 1, -wx});
        if (i + 1 < n) t.push_back({idx, idx + 1, -wx});
        if (j > 0) t.push_back({idx, idx - n, -wy});
        if (j + 1 < n) t.push_back({idx, idx + n, -wy});
        if (k > 0) t.push_back({idx, idx - n * n, -wz});
        if (k + 1 < n) t.push_back({idx, idx + n * n, -wz});
      }
  p.diffusion = SparseMatrix::from_triplets(nn, nn, std::move(t));
  return p;
}

// ------------------------------------------------------------------- Heat

SparseMatrix HeatProblem::coefficient_matrix(const Vector& y) const {
  // Frozen-coefficient flux matrix: interior couplings use the midpoint
  // conductivity k((y_i + y_j)/2); the Dirichlet y-faces enter through the
  // diagonal in the form that keeps the forcing vector constant in time
  // (the conductivity is linear in u, so k((u+b)/2)(b-u) splits into a
  // u^2 part and a constant b^2 part).
  const int n_total = dim();
  std::vector<Triplet> t;
  t.reserve(7 * n_total);
  const double cx = 1.0 / (600.0 * hx * hx);
  const double cy = 1.0 / (6000.0 * hy * hy);
  const double cz = 1.0 / (6000.0 * hz * hz);
  auto id = [&](int i, int j, int k) { return i + nx * (j + ny * k); };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int p = id(i, j, k);
        double diag = 0.0;
        auto couple = [&](int q, double c) {
          const double w = (y(p) + y(q)) * c;  // k(mid)/h^2 with k folded in c
          t.push_back({p, q, -w});
          diag += w;
        };
        couple(id((i + 1) % nx, j, k), cx);       // periodic in x
        couple(id((i - 1 + nx) % nx, j, k), cx);
        if (j + 1 < ny)
          couple(id(i, j + 1, k), cy);
        else
          diag += y(p) * cy;  // Dirichlet face, u^2 part
        if (j > 0)
          couple(id(i, j - 1, k), cy);
        else
          diag += y(p) * cy;
        if (k + 1 < nz) couple(id(i, j, k + 1), cz);  // zero flux at z faces
        if (k > 0) couple(id(i, j, k - 1), cz);
        t.push_back({p, p, diag});
      }
  return SparseMatrix::from_triplets(n_total, n_total, std::move(t));
}

Vector HeatProblem::boundary_forcing() const {
  Vector g = Vector::Zero(dim());
  const double cy = 1.0 / (6000.0 * hy * hy);
  auto id = [&](int i, int j, int k) { return i + nx * (j + ny * k); };
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      g(id(i, 0, k)) += boundary_y0 * boundary_y0 * cy;
      g(id(i, ny - 1, k)) += boundary_y1 * boundary_y1 * cy;
    }
  return g;
}

Vector HeatProblem::initial() const {
  Vector v(dim());
  auto id = [&](int i, int j, int k) { return i + nx * (j + ny * k); };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double x = (i + 1) * hx, y = (j + 1) * hy, z = (k + 0.5) * hz;
        v(id(i, j, k)) = 1800.0 * std::exp(-60.0 * ((x - 0.5) * (x - 0.5) +
                                                    (y - 0.5) * (y - 0.5) +
                                                    (z - 0.5) * (z - 0.5)));
      }
  return v;
}

SplitOde HeatProblem::ode() const {
  SplitOde o;
  o.dim = dim();
  o.initial = initial();
  o.horizon = horizon;
  o.name = "heat";
  const HeatProblem p = *this;
  const Vector g = boundary_forcing();
  o.linear_part = [p](const Vector& anchor) { return p.coefficient_matrix(anchor); };
  o.remainder = [p](const Vector& y, const Vector& anchor) {
    return Vector(p.coefficient_matrix(anchor).apply(y) -
                  p.coefficient_matrix(y).apply(y));
  };
  o.forcing = [g](double) { return g; };
  o.rhs = [p, g](double, const Vector& y) {
    return Vector(-p.coefficient_matrix(y).apply(y) + g);
  };
  o.rhs_jacobian = [p](double, const Vector& y) {
    // The discrete right-hand side is quadratic in the state, so the exact
    // Jacobian assembles from the same stencil with entries u/300 (x) and
    // u/3000 (y, z).
    const int n_total = p.dim();
    std::vector<Triplet> t;
    t.reserve(7 * n_total);
    const double jx = 1.0 / (300.0 * p.hx * p.hx);
    const double jy = 1.0 / (3000.0 * p.hy * p.hy);
    const double jz = 1.0 / (3000.0 * p.hz * p.hz);
    auto id = [&](int i, int j, int k) { return i + p.nx * (j + p.ny * k); };
    for (int k = 0; k < p.nz; ++k)
      for (int j = 0; j < p.ny; ++j)
        for (int i = 0; i < p.nx; ++i) {
          const int q = id(i, j, k);
          double diag = 0.0;
          auto couple = [&](int r, double c) {
            t.push_back({q, r, y(r) * c});
            diag -= y(q) * c;
          };
          couple(id((i + 1) % p.nx, j, k), jx);
          couple(id((i - 1 + p.nx) % p.nx, j, k), jx);
          if (j + 1 < p.ny)
            couple(id(i, j + 1, k), jy);
          else
            diag -= y(q) * jy;
          if (j > 0)
            couple(id(i, j - 1, k), jy);
          else
            diag -= y(q) * jy;
          if (k + 1 < p.nz) couple(id(i, j, k + 1), jz);
          if (k > 0) couple(id(i, j, k - 1), jz);
          t.push_back({q, q, diag});
        }
    return SparseMatrix::from_triplets(n_total, n_total, std::move(t));
  };
  return o;
}

void HeatProblem::write_snapshot(std::ostream& os, const Vector& state) const {
  os.precision(12);
  auto id = [&](int i, int j, int k) { return i + nx * (j + ny * k); };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        os << (i + 1) * hx << " " << (j + 1) * hy << " " << (k + 0.5) * hz << " "
           << state(id(i, j, k)) << "\n";
}

HeatProblem heat_build(int nx, int ny, int nz, double horizon) {
  if (nx < 2 || ny < 2 || nz < 2)
    throw std::invalid_argument("heat_build: need at least 2 nodes per axis");
  HeatProblem p;
  p.nx = nx;
  p.ny = ny;
  p.nz = nz;
  p.horizon = horizon;
  p.hx = 1.0 / (nx + 1);
  p.hy = 1.0 / (ny + 1);
  p.hz = 1.0 / nz;
  return p;
}

}  // namespace ebk
