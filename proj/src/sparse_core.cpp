#include "ebk/sparse_core.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ebk/errors.hpp"

namespace ebk {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<Triplet> entries) {
  if (rows <= 0 || cols <= 0)
    throw DimensionError("SparseMatrix: dimensions must be positive");
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw DimensionError("SparseMatrix: triplet index out of range");
    if (!std::isfinite(t.value))
      throw std::invalid_argument("SparseMatrix: non-finite entry");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      double v = entries[i].value;
      const int c = entries[i].col;
      ++i;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
        v += entries[i].value;
        ++i;
      }
      m.col_idx_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_ptr_[r + 1] = static_cast<int>(m.col_idx_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

Vector SparseMatrix::apply(const Vector& x) const {
  if (x.size() != cols_) throw DimensionError("spmv: dimension mismatch");
  Vector y(rows_);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      acc += values_[k] * x(col_idx_[k]);
    y(r) = acc;
  }
  return y;
}

Matrix SparseMatrix::apply_block(const Matrix& x) const {
  if (x.rows() != cols_) throw DimensionError("spmv: dimension mismatch");
  Matrix y(rows_, x.cols());
  for (int r = 0; r < rows_; ++r) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      acc += values_[k] * x.row(col_idx_[k]);
    y.row(r) = acc;
  }
  return y;
}

double SparseMatrix::one_norm() const {
  std::vector<double> colsum(cols_, 0.0);
  for (size_t k = 0; k < values_.size(); ++k)
    colsum[col_idx_[k]] += std::abs(values_[k]);
  double m = 0.0;
  for (double c : colsum) m = std::max(m, c);
  return m;
}

double SparseMatrix::coeff(int i, int j) const {
  for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
    if (col_idx_[k] == j) return values_[k];
  return 0.0;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({col_idx_[k], r, values_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::symmetric_part() const {
  if (rows_ != cols_) throw DimensionError("symmetric_part: matrix not square");
  std::vector<Triplet> t;
  t.reserve(2 * values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      t.push_back({r, col_idx_[k], 0.5 * values_[k]});
      t.push_back({col_idx_[k], r, 0.5 * values_[k]});
    }
  return from_triplets(rows_, cols_, std::move(t));
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= factor;
  return m;
}

SparseMatrix SparseMatrix::plus(const SparseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionError("plus: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(values_.size() + other.values_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({r, col_idx_[k], values_[k]});
    for (int k = other.row_ptr_[r]; k < other.row_ptr_[r + 1]; ++k)
      t.push_back({r, other.col_idx_[k], other.values_[k]});
  }
  return from_triplets(rows_, cols_, std::move(t));
}

SparseMatrix SparseMatrix::plus_diagonal(const Vector& d, double scale) const {
  if (rows_ != cols_ || d.size() != rows_)
    throw DimensionError("plus_diagonal: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(values_.size() + rows_);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({r, col_idx_[k], values_[k]});
  for (int r = 0; r < rows_; ++r) t.push_back({r, r, scale * d(r)});
  return from_triplets(rows_, cols_, std::move(t));
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  Eigen::SparseMatrix<double> m(rows_, cols_);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.emplace_back(r, col_idx_[k], values_[k]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

void SparseMatrix::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << rows_ << " " << cols_ << " " << nnz() << "\n";
  os.precision(17);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      os << r + 1 << " " << col_idx_[k] + 1 << " " << values_[k] << "\n";
}

Eigen::SparseMatrix<double> Factorization::build_shifted(const SparseMatrix& a) const {
  Eigen::SparseMatrix<double> m(a.rows(), a.cols());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.values().size() + a.rows());
  for (int r = 0; r < a.rows(); ++r)
    for (int k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
      t.emplace_back(r, a.col_idx()[k], shift_ * a.values()[k]);
  for (int r = 0; r < a.rows(); ++r) t.emplace_back(r, r, 1.0);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Factorization::Factorization(const SparseMatrix& a, double shift)
    : shift_(shift), dim_(a.rows()) {
  if (a.rows() != a.cols()) throw DimensionError("Factorization: matrix not square");
  const auto shifted = build_shifted(a);
  lu_.analyzePattern(shifted);
  lu_.factorize(shifted);
  if (lu_.info() != Eigen::Success)
    throw SingularMatrixError("Factorization: I + shift*A is singular");
}

void Factorization::refactorize(const SparseMatrix& a) {
  if (a.rows() != dim_ || a.cols() != dim_)
    throw DimensionError("refactorize: dimension changed");
  lu_.factorize(build_shifted(a));
  if (lu_.info() != Eigen::Success)
    throw SingularMatrixError("Factorization: I + shift*A is singular");
}

Vector Factorization::solve(const Vector& b) const {
  if (b.size() != dim_) throw DimensionError("Factorization::solve: dimension mismatch");
  applications_.fetch_add(1, std::memory_order_relaxed);
  return lu_.solve(b);
}

Matrix Factorization::solve_block(const Matrix& b) const {
  if (b.rows() != dim_) throw DimensionError("Factorization::solve: dimension mismatch");
  applications_.fetch_add(b.cols(), std::memory_order_relaxed);
  return lu_.solve(b);
}

double omega_estimate(const SparseMatrix& symmetric_part, double rel_tol,
                      int max_iterations) {
  const int n = symmetric_part.rows();
  if (n != symmetric_part.cols())
    throw DimensionError("omega_estimate: matrix not square");
  const double norm = symmetric_part.one_norm();
  if (norm == 0.0) return 0.0;

  // Shift so that the smallest eigenvalue maps to the dominant eigenvalue of
  // (I + gamma*S)^{-1}; gamma ~ n^2/||S|| puts gamma*lambda_min at O(1) for
  // grid Laplacians.
  const double gamma = static_cast<double>(n) * n / norm;
  Factorization f(symmetric_part, gamma);

  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(i + 1.0);
  x /= x.norm();
  double lambda = x.dot(symmetric_part.apply(x));
  for (int it = 0; it < max_iterations; ++it) {
    Vector y = f.solve(x);
    const double ny = y.norm();
    if (ny == 0.0) throw ConvergenceError("omega_estimate: iteration collapsed");
    x = y / ny;
    const double next = x.dot(symmetric_part.apply(x));
    if (it >= 2 && std::abs(next - lambda) <= 0.05 * rel_tol * std::abs(next)) {
      return next;
    }
    lambda = next;
  }
  throw ConvergenceError("omega_estimate: no convergence within iteration cap");
}

}  // namespace ebk
