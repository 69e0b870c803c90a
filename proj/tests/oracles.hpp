// Test-only oracles, independent of the library implementation paths:
// a Gauss-Legendre integral evaluator for the phi functions, a classic RK4
// integrator, and deterministic random problem builders.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ebk/dense_kernels.hpp"
#include "ebk/sparse_core.hpp"

namespace oracles {

using ebk::Matrix;
using ebk::Vector;

struct GaussLegendre {
  std::vector<long double> nodes;    // on [0, 1]
  std::vector<long double> weights;

  explicit GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      long double x = std::cos(M_PI * (i + 0.75L) / (n + 0.5L));
      for (int it = 0; it < 100; ++it) {
        long double p0 = 1.0L, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const long double dp = n * (x * p1 - p0) / (x * x - 1.0L);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-19L) break;
      }
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const long double dp = n * (x * p1 - p0) / (x * x - 1.0L);
      nodes[i] = 0.5L * (x + 1.0L);
      weights[i] = 1.0L / ((1.0L - x * x) * dp * dp);
    }
  }
};

/// phi_j(z) through the integral form phi_j(z) = int_0^1 e^{z(1-s)}
/// s^{j-1}/(j-1)! ds, evaluated by a 200-node Gauss-Legendre rule in long
/// double; the integrand is positive, so no cancellation enters.
inline double phi_integral(int j, double z) {
  if (j == 0) return std::exp(z);
  static GaussLegendre gl(200);
  long double fact = 1.0L;
  for (int i = 2; i < j; ++i) fact *= i;
  long double sum = 0.0L;
  for (size_t i = 0; i < gl.nodes.size(); ++i) {
    const long double s = gl.nodes[i];
    long double sp = 1.0L;
    for (int p = 0; p < j - 1; ++p) sp *= s;
    sum += gl.weights[i] * expl(static_cast<long double>(z) * (1.0L - s)) * sp;
  }
  return static_cast<double>(sum / fact);
}

/// Classic fixed-step RK4 for y' = f(t, y).
inline Vector rk4(const std::function<Vector(double, const Vector&)>& f, Vector y,
                  double t0, double span, long steps) {
  const double h = span / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) {
    const double t = t0 + h * static_cast<double>(i);
    const Vector k1 = f(t, y);
    const Vector k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const Vector k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const Vector k4 = f(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

/// RK4 trajectory recorded at the given (ascending) times, starting at t=0.
/// Integrates piecewise so every requested time is hit exactly.
inline std::vector<Vector> rk4_at(const std::function<Vector(double, const Vector&)>& f,
                                  Vector y, const std::vector<double>& times,
                                  double base_step) {
  std::vector<Vector> out;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0) {
      const long steps = std::max<long>(1, std::lround(std::ceil(span / base_step)));
      y = rk4(f, y, t, span, steps);
      t = target;
    }
    out.push_back(y);
  }
  return out;
}

inline Matrix random_matrix(int rows, int cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

/// Dense A = S + K with S symmetric positive definite (smallest eigenvalue
/// exactly omega in exact arithmetic) and K skew; the 2-norm decay bound
/// ||e^{-tA}|| <= e^{-omega t} then holds with C = 1.
inline Matrix dissipative_matrix(int n, double omega, double spread,
                                 double skew_scale, unsigned seed) {
  Matrix base = random_matrix(n, n, seed);
  Eigen::HouseholderQR<Matrix> qr(base);
  Matrix q = qr.householderQ();
  Vector ev(n);
  std::mt19937 rng(seed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ev(0) = omega;
  for (int i = 1; i < n; ++i) ev(i) = omega + spread * u(rng);
  Matrix s = q * ev.asDiagonal() * q.transpose();
  s = 0.5 * (s + s.transpose());
  Matrix k = random_matrix(n, n, seed + 2);
  k = 0.5 * skew_scale * (k - k.transpose());
  return s + k;
}

inline ebk::SparseMatrix to_sparse(const Matrix& m, double drop_tol = 0.0) {
  std::vector<ebk::Triplet> t;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > drop_tol) t.push_back({i, j, m(i, j)});
  return ebk::SparseMatrix::from_triplets(static_cast<int>(m.rows()),
                                          static_cast<int>(m.cols()), std::move(t));
}

}  // namespace oracles
