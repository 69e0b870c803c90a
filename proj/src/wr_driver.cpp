#include "ebk/wr_driver.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "ebk/errors.hpp"

namespace ebk {

Vector SplitOde::split_rhs(double t, const Vector& y, const Vector& anchor) const {
  return -linear_part(anchor).apply(y) + remainder(y, anchor) + forcing_at(t);
}

SplitOde shift_time(const SplitOde& ode, double t0, const Vector& new_initial,
                    double window) {
  SplitOde w = ode;
  w.initial = new_initial;
  w.horizon = window;
  if (ode.forcing) w.forcing = [ode, t0](double t) { return ode.forcing(t0 + t); };
  w.rhs = [ode, t0](double t, const Vector& y) { return ode.rhs(t0 + t, y); };
  if (ode.rhs_jacobian)
    w.rhs_jacobian = [ode, t0](double t, const Vector& y) {
      return ode.rhs_jacobian(t0 + t, y);
    };
  return w;
}

void ConvergenceTrace::write_csv(std::ostream& os) const {
  os << "iteration,residual,relative_error,sigma_tail,inner_cycles,inner_steps,"
        "lus,lu_applications,matvecs\n";
  os.precision(17);
  for (const auto& r : rows) {
    os << r.iteration << ',' << r.residual_norm << ',' << r.relative_error << ','
       << r.sigma_tail << ',' << r.inner_cycles << ',' << r.inner_steps << ','
       << r.lus << ',' << r.lu_applications << ',' << r.matvecs << '\n';
  }
}

WrResult wr_solve(const SplitOde& problem, const WrParams& params) {
  if (problem.dim <= 0 || problem.initial.size() != problem.dim)
    throw DimensionError("wr_solve: inconsistent problem dimensions");
  if (!(params.tol > 0.0)) throw std::invalid_argument("wr_solve: tol must be positive");
  if (params.n_samples < 3 || params.rank < 1)
    throw std::invalid_argument("wr_solve: bad sampling parameters");

  const double horizon = problem.horizon;
  const double gamma = params.gamma > 0.0 ? params.gamma : horizon / 10.0;
  const Vector& v = problem.initial;
  const SampleGrid grid = SampleGrid::chebyshev(params.n_samples, horizon);

  WrResult result{WaveformSolution::constant(v, grid), std::nullopt, {}, false, 0, v};

  // Algorithm start: resnorm of the constant initial guess is ||Phi(T, v)||.
  const double r0_norm = problem.rhs(horizon, v).norm();
  const double threshold =
      params.stop_mode == StopMode::absolute ? params.tol : params.tol * r0_norm;
  result.trace.stop_threshold = threshold;

  Vector reference;
  if (params.reference_final) reference = *params.reference_final;
  auto rel_error = [&](const Vector& y) {
    if (reference.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    return (y - reference).norm() / reference.norm();
  };

  long lus = 0, lu_apps = 0, matvecs = 0;
  double sigma_tail = std::numeric_limits<double>::quiet_NaN();
  int inner_cycles = 0, inner_steps = 0;

  Vector prev_final_state;  // y_{k-1}(T)
  Vector prev_anchor;       // anchor used to compute the current iterate

  for (int k = 0;; ++k) {
    double resnorm;
    if (k == 0) {
      resnorm = r0_norm;
    } else {
      const Vector cur_final = result.solution.final_state();
      Vector rk;
      if (problem.residual_final) {
        rk = problem.residual_final(cur_final, prev_final_state, prev_anchor);
      } else {
        rk = problem.remainder(cur_final, prev_anchor) -
             problem.remainder(prev_final_state, prev_anchor);
      }
      matvecs += 1;  // final-time residual evaluation
      resnorm = rk.norm();
    }

    IterationRecord row;
    row.iteration = k;
    row.residual_norm = resnorm;
    row.relative_error = rel_error(result.solution.final_state());
    row.sigma_tail = sigma_tail;
    row.inner_cycles = inner_cycles;
    row.inner_steps = inner_steps;
    row.lus = lus;
    row.lu_applications = lu_apps;
    row.matvecs = matvecs;
    result.trace.rows.push_back(row);

    if (resnorm <= threshold) {
      result.converged = true;
      break;
    }
    if (k >= params.max_outer) break;  // divergence report, trace attached

    // One waveform relaxation step: freeze the splitting at the anchor,
    // compress the source, solve the linear IVP.
    const Vector anchor = result.solution.final_state();
    const SparseMatrix a_k = problem.linear_part(anchor);

    const double source0_norm =
        (problem.remainder(v, anchor) + problem.forcing_at(0.0)).norm();
    const double tol_lin =
        inner_tolerance(params.inner_stop, source0_norm, params.tol);

    const int m_k =
        std::min(k == 0 ? 1 : params.rank, std::min(params.n_samples, problem.dim));
    const WaveformSolution& y_k = result.solution;
    LowRankSource source = LowRankSource::compress(
        [&](double t) { return problem.remainder(y_k.eval(t), anchor) + problem.forcing_at(t); },
        grid, m_k);
    sigma_tail = source.sigma_tail();

    EbkParams ep;
    ep.gamma = gamma;
    ep.max_steps_per_cycle = params.krylov_dim;
    ep.max_cycles = params.max_inner_cycles;
    ep.tol = tol_lin;
    if (params.inner_dynamic_tol) {
      ep.dynamic_tol = [&params, &y_k](const WaveformSolution& candidate) {
        return params.inner_dynamic_tol(candidate, y_k);
      };
    }

    EbkStats stats;
    WaveformSolution y_next = ebk_solve(a_k, v, source, ep, &stats);
    lus += stats.lus;
    lu_apps += stats.lu_applications;
    matvecs += stats.matvecs;
    inner_cycles = stats.cycles;
    inner_steps = stats.block_steps;

    prev_final_state = result.solution.final_state();
    prev_anchor = anchor;
    result.previous = std::move(result.solution);
    result.solution = std::move(y_next);
    result.iterations = k + 1;
    result.last_anchor = anchor;
    if (params.on_iterate) params.on_iterate(k + 1, result.solution);
  }
  return result;
}

RateResult linear_rate(const BoundInputs& b) {
  const double rate =
      b.c * b.lipschitz * b.horizon * phi_scalar(1, -b.omega * b.horizon);
  return {rate, rate < 1.0};
}

SuperlinearBound superlinear_bound(const BoundInputs& b, int k, double eps0_max,
                                   double t) {
  if (k < 1) throw std::invalid_argument("superlinear_bound: k must be >= 1");
  const double cl = b.c * b.lipschitz;
  if (cl * t == 0.0) return {0.0, 0.0};
  const double log_clt = k * std::log(cl * t);  // (CLt)^k via logs
  SuperlinearBound out;
  out.tight = std::exp(log_clt) * phi_scaled(k, b.omega * t) * eps0_max;
  out.coarse = std::exp(log_clt - std::lgamma(static_cast<double>(k) + 1.0)) * eps0_max;
  return out;
}

ErrorFromResidual residual_to_error(const BoundInputs& b, double t, double max_residual) {
  const double kappa = b.c * t * phi_scalar(1, -b.omega * t);
  const double contraction = b.lipschitz * kappa;
  if (!(contraction < 1.0))
    throw UndefinedBoundError("residual_to_error: C L t phi_1(-wt) >= 1");
  ErrorFromResidual out;
  out.bound = kappa / (1.0 - contraction) * max_residual;
  out.coarse = (b.delta > 0.0 && b.delta < 1.0)
                   ? b.delta / ((1.0 - b.delta) * b.lipschitz) * max_residual
                   : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ResidualFromError error_to_residual(const BoundInputs& b, double t, double max_err_prev) {
  const double contraction = b.c * b.lipschitz * t * phi_scalar(1, -b.omega * t);
  return {(1.0 + contraction) * b.lipschitz * max_err_prev,
          2.0 * b.lipschitz * max_err_prev};
}

RateResult inexact_rate(double delta, double eta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("inexact_rate: delta must be in (0,1)");
  if (!(eta >= 0.0 && eta < 1.0))
    throw std::invalid_argument("inexact_rate: eta must be in [0,1)");
  const double rate = delta * (1.0 + eta) / (1.0 - delta * eta);
  return {rate, eta < (1.0 - delta) / (2.0 * delta)};
}

double inner_tolerance(InnerStopMode mode, double source_norm_at_zero, double tol) {
  if (mode == InnerStopMode::absolute) return tol;
  return std::max(source_norm_at_zero * tol / 10.0, tol * 1e-12);
}

double estimate_lipschitz(const std::function<Vector(const Vector&)>& f,
                          const std::vector<Vector>& states, double spread,
                          unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (const auto& s : states) {
    for (int trial = 0; trial < 8; ++trial) {
      Vector d(s.size());
      for (int i = 0; i < s.size(); ++i) d(i) = gauss(rng);
      d *= spread / d.norm();
      const Vector u = s + d;
      const Vector w = s - d;
      const double ratio = (f(u) - f(w)).norm() / (u - w).norm();
      best = std::max(best, ratio);
    }
  }
  return best;
}

}  // namespace ebk
