#pragma once

#include "ebk/sparse_core.hpp"
#include "ebk/wr_driver.hpp"

namespace ebk {

struct Ros2Stats {
  long steps = 0;
  long lus = 0;
  long lu_applications = 0;
  long fevals = 0;
};

/// L-stable parameter 1 + 1/sqrt(2) of the two-stage Rosenbrock scheme.
double ros2_gamma();

/// Fixed-step two-stage Rosenbrock (ROS2) integration of y' = Phi(t, y) from
/// t0 over the given span.  Each step factorizes I - gamma*tau*J with the
/// exact Jacobian at the step head and applies it twice.
Vector ros2_integrate(const SplitOde& problem, const Vector& v, double t0,
                      double span, long steps, Ros2Stats* stats = nullptr);

/// High-accuracy final state: ROS2 with the step count doubled until two
/// successive answers agree to target_accuracy/10 in relative norm; returns
/// the finer answer.
Vector reference_solution(const SplitOde& problem, double target_accuracy,
                          long initial_steps = 128, int max_doublings = 22,
                          Ros2Stats* stats = nullptr);

/// ||y - y_ref|| / ||y_ref||; throws on a zero reference.
double relative_error(const Vector& y, const Vector& y_ref);

}  // namespace ebk
