#include "ebk/ebk_linear.hpp"

#include <cmath>

#include "ebk/errors.hpp"

namespace ebk {

Vector propagate_substep(const Matrix& h, const Vector& u_start, const Vector& q_begin,
                         const Vector& q_end, double full_width, double dt) {
  const int k = static_cast<int>(h.rows());
  if (dt == 0.0) return u_start;
  if (!(full_width > 0.0) || dt < 0.0 || dt > full_width)
    throw std::invalid_argument("propagate_substep: bad interval widths");
  // Augmented exponential: with M = -dt*H and B = [b1 b2], the top-right
  // column of exp([[M, B], [0, N]]) equals phi_1(M) b2 + phi_2(M) b1.
  Matrix c = Matrix::Zero(k + 2, k + 2);
  c.topLeftCorner(k, k) = -dt * h;
  c.block(0, k, k, 1) = (dt * dt / full_width) * (q_end - q_begin);
  c.block(0, k + 1, k, 1) = dt * q_begin;
  c(k, k + 1) = 1.0;
  const Matrix e = expm_dense(c);
  return e.topLeftCorner(k, k) * u_start + e.block(0, k + 1, k, 1);
}

Matrix propagate_projected(const Matrix& h, const Vector& u0,
                           const Matrix& forcing_samples, const SampleGrid& grid) {
  const int k = static_cast<int>(h.rows());
  const int n_s = grid.size();
  if (h.cols() != k || u0.size() != k || forcing_samples.rows() != k ||
      forcing_samples.cols() != n_s)
    throw DimensionError("propagate_projected: shape mismatch");
  Matrix traj(k, n_s);
  traj.col(0) = u0;
  for (int j = 0; j + 1 < n_s; ++j) {
    const double w = grid.points[j + 1] - grid.points[j];
    traj.col(j + 1) = propagate_substep(h, traj.col(j), forcing_samples.col(j),
                                        forcing_samples.col(j + 1), w, w);
  }
  return traj;
}

WaveformSolution WaveformSolution::constant(const Vector& v, SampleGrid grid) {
  WaveformSolution sol(static_cast<int>(v.size()), std::move(grid));
  const double nv = v.norm();
  if (nv > 0.0) {
    Segment s;
    s.basis = v / nv;
    s.projected_op = Matrix::Zero(1, 1);
    s.forcing = Matrix::Zero(1, sol.grid_.size());
    s.u0 = Vector::Constant(1, nv);
    s.trajectory = Matrix::Constant(1, sol.grid_.size(), nv);
    s.readoff_map = Matrix(0, 1);
    s.readoff_r = Matrix(0, 0);
    sol.segments_.push_back(std::move(s));
  }
  return sol;
}

namespace {

Vector segment_u(const WaveformSolution::Segment& s, const SampleGrid& grid, double t) {
  const int j = grid.find_interval(t);
  if (t == grid.points[j]) return s.trajectory.col(j);
  if (t == grid.points[j + 1]) return s.trajectory.col(j + 1);
  const double w = grid.points[j + 1] - grid.points[j];
  return propagate_substep(s.projected_op, s.trajectory.col(j), s.forcing.col(j),
                           s.forcing.col(j + 1), w, t - grid.points[j]);
}

}  // namespace

Vector WaveformSolution::eval_segment(const Segment& s, double t) const {
  return s.basis * segment_u(s, grid_, t);
}

Vector WaveformSolution::eval(double t) const {
  Vector y = Vector::Zero(dim_);
  for (const auto& s : segments_) y += eval_segment(s, t);
  return y;
}

double WaveformSolution::residual_norm(double t) const {
  if (segments_.empty()) return 0.0;
  const Segment& s = segments_.back();
  if (s.readoff_map.rows() == 0) return 0.0;
  return (s.readoff_r * (s.readoff_map * segment_u(s, grid_, t))).norm();
}

double linear_residual_norm(const WaveformSolution& sol, double t) {
  return sol.residual_norm(t);
}

WaveformSolution ebk_solve(const SparseMatrix& a, const Vector& v,
                           const LowRankSource& source, const EbkParams& params,
                           EbkStats* stats_out) {
  EbkStats local;
  EbkStats& st = stats_out ? (*stats_out = EbkStats{}, *stats_out) : local;

  const int n = a.rows();
  if (!(params.gamma > 0.0))
    throw std::invalid_argument("ebk_solve: gamma must be positive");
  if (v.size() != n || source.dim() != n)
    throw DimensionError("ebk_solve: dimension mismatch");

  const SampleGrid& grid = source.grid();
  const int n_s = grid.size();

  std::vector<int> monitors;
  const int mi = std::min(params.monitor_interior, n_s - 2);
  for (int i = 1; i <= mi; ++i)
    monitors.push_back(
        static_cast<int>(std::llround(static_cast<double>(i) * (n_s - 1) / (mi + 1))));
  monitors.push_back(n_s - 1);

  Factorization fac(a, params.gamma);
  st.lus = 1;

  WaveformSolution sol(n, grid);
  Vector v_cycle = v;
  Matrix u_src = source.basis();
  Matrix p_src = source.coefficient_samples();

  bool converged = false;
  for (int cycle = 1; cycle <= params.max_cycles && !converged; ++cycle) {
    st.cycles = cycle;

    const double vnorm = v_cycle.norm();
    const int m_src = static_cast<int>(u_src.cols());
    Matrix start(n, (vnorm > 0.0 ? 1 : 0) + m_src);
    if (vnorm > 0.0) start.col(0) = v_cycle;
    if (m_src > 0) start.rightCols(m_src) = u_src;
    BlockQr q0 = start.cols() > 0 ? block_orthonormalize(start) : BlockQr{};
    st.deflations += static_cast<int>(q0.deflated.size());
    Matrix basis = q0.q;
    const int w1 = static_cast<int>(basis.cols());
    if (w1 == 0) {  // zero initial value and zero source: done
      st.final_residual = 0.0;
      converged = true;
      break;
    }
    // Projected initial value and source over the first block; exact since
    // both lie in its span by construction.
    Vector u0_first = vnorm > 0.0 ? Vector(q0.r.col(0)) : Vector::Zero(w1);
    Matrix f0 = m_src > 0 ? Matrix(q0.r.rightCols(m_src) * p_src) : Matrix::Zero(w1, n_s);

    Matrix hb(w1, 0);
    Matrix last_block = basis;

    // Per-step results, consumed at convergence or restart.
    Matrix traj, readoff, r_m, q_m, h_op, forcing;
    Vector u0_proj;
    double res_at_final = std::numeric_limits<double>::infinity();

    for (int step = 1; step <= params.max_steps_per_cycle; ++step) {
      const int wp = static_cast<int>(last_block.cols());
      const int k_before = static_cast<int>(basis.cols());
      Matrix w = fac.solve_block(last_block);
      BlockQr bq = block_orthonormalize(w, &basis);
      st.deflations += static_cast<int>(bq.deflated.size());
      const int w_new = static_cast<int>(bq.q.cols());

      {
        Matrix hb_new = Matrix::Zero(k_before + w_new, k_before);
        hb_new.topLeftCorner(hb.rows(), hb.cols()) = hb;
        hb_new.block(0, k_before - wp, k_before, wp) = bq.against_coeffs;
        if (w_new > 0) hb_new.block(k_before, k_before - wp, w_new, wp) = bq.r;
        hb = std::move(hb_new);
      }

      // Back-transform the SAI projection: L = (H^{-1} - I)/gamma.
      const Matrix h_small = hb.topRows(k_before);
      Eigen::PartialPivLU<Matrix> lu(h_small);
      const Matrix h_inv = lu.inverse();
      if (!h_inv.allFinite())
        throw SingularMatrixError("ebk_solve: projected SAI operator singular");
      h_op = (h_inv - Matrix::Identity(k_before, k_before)) / params.gamma;

      u0_proj = Vector::Zero(k_before);
      u0_proj.head(w1) = u0_first;
      forcing = Matrix::Zero(k_before, n_s);
      forcing.topRows(w1) = f0;
      traj = propagate_projected(h_op, u0_proj, forcing, grid);

      if (w_new > 0) {
        readoff = (hb.bottomRows(w_new) * h_inv) / params.gamma;
        Matrix m_aux = bq.q + params.gamma * a.apply_block(bq.q);
        st.matvecs += w_new;
        Eigen::HouseholderQR<Matrix> qr(m_aux);
        r_m = qr.matrixQR().topRows(w_new).triangularView<Eigen::Upper>();
        q_m = qr.householderQ() * Matrix::Identity(n, w_new);
      } else {  // invariant subspace reached: residual vanishes identically
        readoff = Matrix(0, k_before);
        r_m = Matrix(0, 0);
        q_m = Matrix(n, 0);
      }

      auto residual_at = [&](int idx) {
        if (readoff.rows() == 0) return 0.0;
        return (r_m * (readoff * traj.col(idx))).norm();
      };
      res_at_final = residual_at(n_s - 1);
      double res_max = 0.0;
      for (int idx : monitors) res_max = std::max(res_max, residual_at(idx));

      st.block_steps += 1;
      st.step_residuals.push_back(res_at_final);

      double threshold = params.tol;
      if (params.dynamic_tol) {
        sol.segments().push_back({basis, h_op, forcing, u0_proj, traj, readoff, r_m});
        threshold = params.dynamic_tol(sol);
        sol.segments().pop_back();
      }

      if (res_max <= threshold || w_new == 0) {
        converged = true;
        break;
      }
      if (step == params.max_steps_per_cycle) break;
      basis.conservativeResize(Eigen::NoChange, k_before + w_new);
      basis.rightCols(w_new) = bq.q;
      last_block = bq.q;
    }

    sol.segments().push_back({std::move(basis), std::move(h_op), std::move(forcing),
                              std::move(u0_proj), std::move(traj), readoff, r_m});
    st.cycle_residuals.push_back(res_at_final);
    st.final_residual = res_at_final;

    if (!converged) {
      // Restart: by linearity the residual r(t) of the accumulated solution
      // is the source of the remaining correction IVP with zero initial
      // value; its exactly factored form seeds the next cycle.
      const auto& seg = sol.segments().back();
      u_src = q_m;
      p_src = r_m * (seg.readoff_map * seg.trajectory);
      v_cycle = Vector::Zero(n);
    }
  }

  st.lu_applications = fac.applications();
  if (!converged)
    throw ConvergenceError("ebk_solve: residual target not reached within max_cycles");
  return sol;
}

}  // namespace ebk
