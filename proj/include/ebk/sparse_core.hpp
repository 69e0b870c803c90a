#pragma once

#include <Eigen/Sparse>
#include <atomic>
#include <iosfwd>
#include <vector>

#include "ebk/dense_kernels.hpp"

namespace ebk {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Square sparse matrix in compressed-row form.  Indices are sorted per row
/// and duplicates are summed at construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);
  static SparseMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long nnz() const { return static_cast<long>(values_.size()); }

  Vector apply(const Vector& x) const;
  Matrix apply_block(const Matrix& x) const;

  double one_norm() const;  ///< max absolute column sum
  double coeff(int i, int j) const;

  SparseMatrix transpose() const;
  SparseMatrix symmetric_part() const;  ///< (A + A^T)/2
  SparseMatrix scaled(double factor) const;
  SparseMatrix plus(const SparseMatrix& other) const;
  /// A + scale * diag(d)
  SparseMatrix plus_diagonal(const Vector& d, double scale = 1.0) const;

  Eigen::SparseMatrix<double> to_eigen() const;
  void write_matrix_market(std::ostream& os) const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Direct factorization of I + shift*A, computed once and applied many
/// times.  Each column solve counts as one LU application.
class Factorization {
 public:
  Factorization(const SparseMatrix& a, double shift);
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  /// Refactorizes with a new matrix of identical sparsity pattern,
  /// reusing the symbolic analysis.  The shift is unchanged.
  void refactorize(const SparseMatrix& a);

  Vector solve(const Vector& b) const;
  Matrix solve_block(const Matrix& b) const;

  double shift() const { return shift_; }
  int dim() const { return dim_; }
  long applications() const { return applications_.load(); }

 private:
  Eigen::SparseMatrix<double> build_shifted(const SparseMatrix& a) const;

  double shift_;
  int dim_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  mutable std::atomic<long> applications_{0};
};

/// Smallest eigenvalue of a symmetric matrix by shift-and-invert power
/// iteration with Rayleigh-quotient estimates, to ~3 significant digits.
double omega_estimate(const SparseMatrix& symmetric_part, double rel_tol = 1e-3,
                      int max_iterations = 200);

}  // namespace ebk
