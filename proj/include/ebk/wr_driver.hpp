#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ebk/ebk_linear.hpp"
#include "ebk/source_model.hpp"
#include "ebk/sparse_core.hpp"

namespace ebk {

/// Problem oracle for the split iteration: the right-hand side is
/// Phi(t, y) = -A(anchor) y + f(y; anchor) + g(t), with the matrix and the
/// Lipschitz remainder refreshed at an anchor state each outer iteration.
struct SplitOde {
  int dim = 0;
  Vector initial;
  double horizon = 0.0;
  std::string name;

  std::function<SparseMatrix(const Vector& anchor)> linear_part;
  std::function<Vector(const Vector& y, const Vector& anchor)> remainder;
  std::function<Vector(double t)> forcing;  ///< may be null (zero forcing)
  std::function<Vector(double t, const Vector& y)> rhs;  ///< full Phi(t, y)
  std::function<SparseMatrix(double t, const Vector& y)> rhs_jacobian;  ///< for ROS2
  /// Optional problem-specific closed form of the final-time nonlinear
  /// residual f_k(y_next(T)) - f_k(y_curr(T)); the generic difference is
  /// used when absent.
  std::function<Vector(const Vector& y_next_final, const Vector& y_curr_final,
                       const Vector& anchor)>
      residual_final;

  Vector forcing_at(double t) const {
    return forcing ? forcing(t) : Vector::Zero(dim);
  }
  /// -A(anchor) y + f(y; anchor) + g(t); equals rhs(t, y) for a consistent
  /// splitting.
  Vector split_rhs(double t, const Vector& y, const Vector& anchor) const;
};

/// Returns the ODE with time shifted by t0 (forcing and rhs read the
/// original clock); used by multi-window restarting.
SplitOde shift_time(const SplitOde& ode, double t0, const Vector& new_initial,
                    double window);

enum class StopMode { absolute, relative };
enum class InnerStopMode { absolute, scaled };

struct WrParams {
  double tol = 1e-3;
  StopMode stop_mode = StopMode::absolute;
  int rank = 7;         ///< m, singular vectors kept (first iteration uses 1)
  int n_samples = 100;  ///< n_s
  int krylov_dim = 10;  ///< inner block steps per cycle
  double gamma = 0.0;   ///< SAI shift; <= 0 means horizon/10
  int max_outer = 100;
  int max_inner_cycles = 50;
  InnerStopMode inner_stop = InnerStopMode::absolute;
  /// Optional reference final state: fills the relative-error trace column.
  const Vector* reference_final = nullptr;
  /// Test hook, called with every new iterate.
  std::function<void(int iteration, const WaveformSolution&)> on_iterate;
  /// Optional dynamic inner stop (inexact-iteration harness): threshold from
  /// the inner candidate and the previous outer iterate.
  std::function<double(const WaveformSolution& candidate, const WaveformSolution& previous)>
      inner_dynamic_tol;
};

struct IterationRecord {
  int iteration = 0;        ///< index k of the iterate y_k (0 = initial guess)
  double residual_norm = 0;  ///< ||r_k(T)||
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  double sigma_tail = std::numeric_limits<double>::quiet_NaN();
  int inner_cycles = 0;  ///< for the solve that produced this iterate
  int inner_steps = 0;
  long lus = 0;  ///< cumulative counters
  long lu_applications = 0;
  long matvecs = 0;
};

struct ConvergenceTrace {
  std::vector<IterationRecord> rows;
  bool converged = false;
  double stop_threshold = std::numeric_limits<double>::quiet_NaN();
  void write_csv(std::ostream& os) const;
};

struct WrResult {
  WaveformSolution solution;          ///< final iterate
  std::optional<WaveformSolution> previous;  ///< second-to-last iterate
  ConvergenceTrace trace;
  bool converged = false;
  int iterations = 0;  ///< inner solves performed
  Vector last_anchor;  ///< anchor of the final solve
};

/// Nonlinear waveform relaxation: iterates the linear inhomogeneous IVP with
/// the source resampled from the previous iterate, inner-solved by ebk_solve,
/// until the final-time nonlinear residual meets the stop rule.
WrResult wr_solve(const SplitOde& problem, const WrParams& params);

// --- convergence-bound calculators ---------------------------------------

struct BoundInputs {
  double c = 1.0;        ///< decay constant, >= 1
  double lipschitz = 0;  ///< L
  double omega = 0.0;    ///< decay rate, >= 0
  double horizon = 0.0;  ///< T
  double eta = 0.0;      ///< inner inexactness factor
  double delta = 0.0;    ///< contraction bound in (0,1)
};

struct RateResult {
  double rate = 0.0;
  bool convergent = false;
};

/// C L T phi_1(-omega T); convergent iff < 1.
RateResult linear_rate(const BoundInputs& b);

struct SuperlinearBound {
  double tight = 0.0;   ///< (CL)^k t^k e^{-wt} phi_k(wt) * eps0
  double coarse = 0.0;  ///< (CLt)^k / k! * eps0
};
SuperlinearBound superlinear_bound(const BoundInputs& b, int k, double eps0_max,
                                   double t);

struct ErrorFromResidual {
  double bound = 0.0;   ///< C t phi_1(-wt) / (1 - C L t phi_1(-wt)) * res
  double coarse = 0.0;  ///< delta/((1-delta) L) * res, NaN when delta unset
};
/// Throws UndefinedBoundError when C L t phi_1(-wt) >= 1.
ErrorFromResidual residual_to_error(const BoundInputs& b, double t, double max_residual);

struct ResidualFromError {
  double bound = 0.0;     ///< (1 + C L t phi_1(-wt)) L * err
  double two_l_bound = 0.0;  ///< 2 L * err
};
ResidualFromError error_to_residual(const BoundInputs& b, double t, double max_err_prev);

/// rate = delta (1+eta) / (1 - delta eta); convergent iff eta < (1-delta)/(2 delta).
RateResult inexact_rate(double delta, double eta);

/// Inner tolerance: absolute mode returns tol; scaled mode returns
/// ||f_k(y_k(0)) + g(0)|| * tol / 10 with a tol*1e-12 floor against a zero
/// source.
double inner_tolerance(InnerStopMode mode, double source_norm_at_zero, double tol);

/// Samples ||f(u) - f(w)|| / ||u - w|| over perturbation pairs around the
/// given states and returns the largest ratio seen (diagnostic estimate).
double estimate_lipschitz(const std::function<Vector(const Vector&)>& f,
                          const std::vector<Vector>& states, double spread,
                          unsigned seed = 7);

}  // namespace ebk
