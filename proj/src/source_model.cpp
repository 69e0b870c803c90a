#include "ebk/source_model.hpp"

#include <cmath>

#include "ebk/errors.hpp"

namespace ebk {

SampleGrid SampleGrid::chebyshev(int n_samples, double horizon) {
  if (n_samples < 3) throw std::invalid_argument("SampleGrid: need at least 3 points");
  if (!(horizon > 0.0)) throw std::invalid_argument("SampleGrid: horizon must be positive");
  SampleGrid g;
  g.points.resize(n_samples);
  g.points.front() = 0.0;
  g.points.back() = horizon;
  for (int j = 2; j <= n_samples - 1; ++j) {
    const double angle = M_PI * (j - 1.5) / (n_samples - 2);
    g.points[j - 1] = 0.5 * horizon * (1.0 - std::cos(angle));
  }
  return g;
}

int SampleGrid::find_interval(double t) const {
  if (t < points.front() || t > points.back())
    throw std::domain_error("SampleGrid: t outside [0, T]");
  int lo = 0, hi = static_cast<int>(points.size()) - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (points[mid] <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

LowRankSource LowRankSource::compress(const std::function<Vector(double)>& sample,
                                      const SampleGrid& grid, int rank) {
  const int n_s = grid.size();
  if (rank < 1 || rank > n_s)
    throw std::invalid_argument("LowRankSource: rank must be in [1, n_s]");
  Matrix g;
  for (int j = 0; j < n_s; ++j) {
    Vector col = sample(grid.points[j]);
    if (j == 0) g = Matrix(col.size(), n_s);
    g.col(j) = col;
  }
  const int n = static_cast<int>(g.rows());
  if (rank > std::min(n, n_s))
    throw std::invalid_argument("LowRankSource: rank exceeds matrix dimensions");

  LowRankSource s;
  s.grid_ = grid;
  if (n >= n_s) {
    ThinSvd svd = thin_svd(g);
    s.basis_ = svd.u.leftCols(rank);
    s.coeffs_ = svd.sigma.head(rank).asDiagonal() * svd.vt.topRows(rank);
    s.sigma_tail_ = rank < svd.sigma.size() ? svd.sigma(rank) : 0.0;
  } else {
    // Wide sample matrix: factor the transpose and swap the roles.
    ThinSvd svd = thin_svd(g.transpose());
    s.basis_ = svd.vt.topRows(rank).transpose();
    s.coeffs_ = svd.sigma.head(rank).asDiagonal() * svd.u.leftCols(rank).transpose();
    s.sigma_tail_ = rank < svd.sigma.size() ? svd.sigma(rank) : 0.0;
  }
  return s;
}

LowRankSource LowRankSource::from_factors(Matrix basis, Matrix coefficient_samples,
                                          SampleGrid grid, double sigma_tail) {
  if (basis.cols() != coefficient_samples.rows())
    throw DimensionError("LowRankSource: factor shape mismatch");
  if (coefficient_samples.cols() != grid.size())
    throw DimensionError("LowRankSource: samples do not match grid");
  LowRankSource s;
  s.basis_ = std::move(basis);
  s.coeffs_ = std::move(coefficient_samples);
  s.grid_ = std::move(grid);
  s.sigma_tail_ = sigma_tail;
  return s;
}

Vector LowRankSource::coefficients_at(double t) const {
  const int j = grid_.find_interval(t);
  const double t0 = grid_.points[j];
  if (t == t0) return coeffs_.col(j);
  const double t1 = grid_.points[j + 1];
  if (t == t1) return coeffs_.col(j + 1);
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * coeffs_.col(j) + w * coeffs_.col(j + 1);
}

Vector LowRankSource::value_at(double t) const { return basis_ * coefficients_at(t); }

}  // namespace ebk
