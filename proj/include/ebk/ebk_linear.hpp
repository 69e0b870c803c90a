#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ebk/dense_kernels.hpp"
#include "ebk/source_model.hpp"
#include "ebk/sparse_core.hpp"

namespace ebk {

class WaveformSolution;

struct EbkParams {
  double gamma = 0.0;            ///< SAI shift (> 0)
  int max_steps_per_cycle = 10;  ///< Krylov block steps per restart cycle
  int max_cycles = 50;
  double tol = 1e-6;             ///< absolute residual target at the monitor points
  /// Optional dynamic stop rule: recomputes the threshold from the current
  /// candidate solution (inexact-iteration harness).  Overrides tol.
  std::function<double(const WaveformSolution&)> dynamic_tol;
  int monitor_interior = 8;      ///< interior residual check points besides t = T
};

struct EbkStats {
  int cycles = 0;
  int block_steps = 0;
  long lus = 0;
  long lu_applications = 0;
  long matvecs = 0;
  int deflations = 0;
  std::vector<double> step_residuals;   ///< residual norm at T after each block step
  std::vector<double> cycle_residuals;  ///< residual norm at T at each cycle end
  double final_residual = std::numeric_limits<double>::infinity();
};

/// Compact waveform y(t) = sum_c V_c u_c(t) over [0, T].  Each restart cycle
/// contributes one segment: a basis, the projected operator, the projected
/// source and trajectory, and the recurrence data needed to read off the
/// linear residual without differentiating y.
class WaveformSolution {
 public:
  struct Segment {
    Matrix basis;         // N x K
    Matrix projected_op;  // K x K, back-transformed SAI projection of A
    Matrix forcing;       // K x n_s, projected source samples basis^T U p(t_j)
    Vector u0;            // projected initial value
    Matrix trajectory;    // K x n_s, u at the grid points
    Matrix readoff_map;   // w x K, xi(t) = readoff_map * u(t)
    Matrix readoff_r;     // w x w, ||r(t)|| = ||readoff_r * xi(t)||
  };

  WaveformSolution(int dim, SampleGrid grid) : dim_(dim), grid_(std::move(grid)) {}
  static WaveformSolution constant(const Vector& v, SampleGrid grid);

  Vector eval(double t) const;
  Vector final_state() const { return eval(grid_.horizon()); }
  /// Residual norm of the stored solution at time t, read off from the
  /// Krylov recurrence of the last segment.
  double residual_norm(double t) const;

  int dim() const { return dim_; }
  const SampleGrid& grid() const { return grid_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<Segment>& segments() { return segments_; }

 private:
  Vector eval_segment(const Segment& s, double t) const;
  friend double linear_residual_norm(const WaveformSolution&, double);

  int dim_;
  SampleGrid grid_;
  std::vector<Segment> segments_;
};

/// Exact solution of the projected IVP u' = -H u + q(t), u(0) = u0, where
/// q is piecewise linear with the given samples at the grid points.  Each
/// subinterval is advanced by one variation-of-constants step assembled from
/// exp/phi_1/phi_2 actions.  Returns u at all grid points.
Matrix propagate_projected(const Matrix& h, const Vector& u0,
                           const Matrix& forcing_samples, const SampleGrid& grid);

/// Single subinterval of the above: advances u_start by width dt with the
/// forcing linear in t from q_begin (at local time 0) to q_end (at local
/// time full_width); dt <= full_width supports evaluation inside the
/// subinterval.
Vector propagate_substep(const Matrix& h, const Vector& u_start, const Vector& q_begin,
                         const Vector& q_end, double full_width, double dt);

/// Solves y' = -A y + U p(t), y(0) = v over the source's grid by restarted
/// block Arnoldi on (I + gamma*A)^{-1}.  Stops when the residual at the
/// monitor points is below the (possibly dynamic) tolerance; on reaching the
/// per-cycle step cap, restarts with the current residual as the new source
/// and accumulates the correction.
WaveformSolution ebk_solve(const SparseMatrix& a, const Vector& v,
                           const LowRankSource& source, const EbkParams& params,
                           EbkStats* stats = nullptr);

double linear_residual_norm(const WaveformSolution& sol, double t);

}  // namespace ebk
