#pragma once

#include "ebk/sparse_core.hpp"
#include "ebk/wr_driver.hpp"

namespace ebk {

/// 1D viscous Burgers equation u_t = nu u_xx - u u_x on [0,1], homogeneous
/// Dirichlet, u(x,0) = 3/2 x (1-x)^2, discretized on n interior nodes with
/// second-order central differences.  The convection term is written as
/// (1/3) u u_x + (2/3) (u^2/2)_x so its matrix is exactly skew-symmetric.
struct BurgersProblem {
  int n = 0;
  double viscosity = 0.0;
  double horizon = 0.0;
  double dx = 0.0;
  SparseMatrix diffusion;  ///< SPD matrix of -nu u_xx

  SparseMatrix convection(const Vector& y) const;  ///< skew matrix with A(y)y ~ u u_x
  Vector initial() const;
  SplitOde ode() const;
  void write_snapshot(std::ostream& os, const Vector& state) const;
};
BurgersProblem burgers_build(int n, double viscosity, double horizon);

/// 3D Liouville-Bratu-Gelfand problem with anisotropic diffusion
/// (1e4, 1e2, 1), reaction C e^u, and a moving Gaussian source; zero
/// Dirichlet on all faces, n interior nodes per axis.
struct BratuProblem {
  int n = 0;
  double horizon = 0.0;
  double h = 0.0;
  double reaction_constant = 3e4;
  SparseMatrix diffusion;  ///< SPD anisotropic 7-point matrix

  Vector reaction(const Vector& y) const;       ///< C e^{y_i}
  Vector reaction_jacobian(const Vector& y) const;  ///< diagonal C e^{y_i}
  Vector source(double t) const;                ///< g(t) at the grid nodes
  Vector initial() const;
  SplitOde ode() const;
  void write_snapshot(std::ostream& os, const Vector& state) const;
};
BratuProblem bratu_build(int n, double horizon);

/// 3D nonlinear heat conduction u_t = div(k(u) grad u) with k^(x) = u/300,
/// k^(y) = k^(z) = k^(x)/10; periodic coupling in x, Dirichlet 900/300 in y,
/// homogeneous Neumann in z on a staggered grid.
struct HeatProblem {
  int nx = 0, ny = 0, nz = 0;
  double horizon = 0.0;
  double hx = 0.0, hy = 0.0, hz = 0.0;
  double boundary_y0 = 900.0;
  double boundary_y1 = 300.0;

  int dim() const { return nx * ny * nz; }
  SparseMatrix coefficient_matrix(const Vector& y) const;  ///< A(y)
  Vector boundary_forcing() const;                          ///< constant g
  Vector initial() const;
  SplitOde ode() const;
  void write_snapshot(std::ostream& os, const Vector& state) const;
};
HeatProblem heat_build(int nx, int ny, int nz, double horizon);

}  // namespace ebk
