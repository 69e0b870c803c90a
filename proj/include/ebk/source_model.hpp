#pragma once

#include <functional>
#include <vector>

#include "ebk/dense_kernels.hpp"

namespace ebk {

/// Time sample grid on [0, T]: endpoints plus Chebyshev-root interior points.
struct SampleGrid {
  std::vector<double> points;

  static SampleGrid chebyshev(int n_samples, double horizon);

  double horizon() const { return points.back(); }
  int size() const { return static_cast<int>(points.size()); }
  /// Index j with points[j] <= t <= points[j+1]; throws outside [0, T].
  int find_interval(double t) const;
};

/// Factored approximation g(t) ~ basis * p(t) of a sampled vector function,
/// with p piecewise linear between the sample points.  The basis is
/// orthonormal; singular values are folded into the coefficients.
class LowRankSource {
 public:
  static LowRankSource compress(const std::function<Vector(double)>& sample,
                                const SampleGrid& grid, int rank);
  /// Wraps precomputed factors (used when a source is exactly low rank
  /// already, e.g. an inner-solver restart residual).
  static LowRankSource from_factors(Matrix basis, Matrix coefficient_samples,
                                    SampleGrid grid, double sigma_tail = 0.0);

  const Matrix& basis() const { return basis_; }
  const Matrix& coefficient_samples() const { return coeffs_; }
  const SampleGrid& grid() const { return grid_; }
  int rank() const { return static_cast<int>(basis_.cols()); }
  int dim() const { return static_cast<int>(basis_.rows()); }
  /// Largest truncated singular value, the low-rank representation error
  /// indicator.
  double sigma_tail() const { return sigma_tail_; }

  /// p(t) by linear interpolation; exact at the sample points.
  Vector coefficients_at(double t) const;
  /// basis * p(t)
  Vector value_at(double t) const;

 private:
  Matrix basis_;   // N x m
  Matrix coeffs_;  // m x n_s
  SampleGrid grid_;
  double sigma_tail_ = 0.0;
};

}  // namespace ebk
