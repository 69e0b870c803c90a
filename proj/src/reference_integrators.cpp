#include "ebk/reference_integrators.hpp"

#include <cmath>
#include <memory>

#include "ebk/errors.hpp"

namespace ebk {

double ros2_gamma() { return 1.0 + 1.0 / std::sqrt(2.0); }

Vector ros2_integrate(const SplitOde& problem, const Vector& v, double t0,
                      double span, long steps, Ros2Stats* stats) {
  if (steps < 1) throw std::invalid_argument("ros2_integrate: steps must be >= 1");
  if (!problem.rhs || !problem.rhs_jacobian)
    throw std::invalid_argument("ros2_integrate: problem needs rhs and jacobian");
  const double tau = span / static_cast<double>(steps);
  const double g = ros2_gamma();
  Vector y = v;
  std::unique_ptr<Factorization> fac;  // pattern reused across steps
  for (long ell = 0; ell < steps; ++ell) {
    const double t = t0 + tau * static_cast<double>(ell);
    // I - gamma*tau*J, factored through the I + shift*A convention.
    const SparseMatrix neg_jac = problem.rhs_jacobian(t, y).scaled(-1.0);
    if (!fac)
      fac = std::make_unique<Factorization>(neg_jac, g * tau);
    else
      fac->refactorize(neg_jac);
    const Vector k1 = fac->solve(problem.rhs(t, y));
    const Vector k2 = fac->solve(problem.rhs(t + tau, y + tau * k1) - 2.0 * k1);
    y += 1.5 * tau * k1 + 0.5 * tau * k2;
    if (stats) {
      stats->steps += 1;
      stats->lus += 1;
      stats->lu_applications += 2;
      stats->fevals += 2;
    }
  }
  return y;
}

Vector reference_solution(const SplitOde& problem, double target_accuracy,
                          long initial_steps, int max_doublings, Ros2Stats* stats) {
  if (!(target_accuracy >= 1e-10))
    throw std::invalid_argument("reference_solution: target must be >= 1e-10");
  long steps = initial_steps;
  Vector coarse = ros2_integrate(problem, problem.initial, 0.0, problem.horizon,
                                 steps, stats);
  for (int d = 0; d < max_doublings; ++d) {
    steps *= 2;
    Vector fine = ros2_integrate(problem, problem.initial, 0.0, problem.horizon,
                                 steps, stats);
    const double diff = (fine - coarse).norm() / fine.norm();
    if (diff < target_accuracy / 10.0) return fine;
    coarse = std::move(fine);
  }
  throw ConvergenceError("reference_solution: halving sequence did not settle");
}

double relative_error(const Vector& y, const Vector& y_ref) {
  const double nref = y_ref.norm();
  if (nref == 0.0) throw std::invalid_argument("relative_error: zero reference");
  return (y - y_ref).norm() / nref;
}

}  // namespace ebk
