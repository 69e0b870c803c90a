#include "ebk/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebk/errors.hpp"

namespace ebk {

namespace {

long double factorial_ld(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Taylor series sum_k z^k / (k+j)!, adequate for |z| < 0.5 where terms decay
// immediately and alternation is harmless.
double phi_taylor_small(int j, double z) {
  long double sum = 0.0L, term = 1.0L / factorial_ld(j);
  const long double zl = z;
  for (int k = 0; k < 30; ++k) {
    sum += term;
    term *= zl / (k + j + 1);
  }
  return static_cast<double>(sum);
}

// Plain series for z >= 0.5: all terms positive, no cancellation.
double phi_series_positive(int j, double z) {
  long double sum = 0.0L, term = 1.0L / factorial_ld(j);
  const long double zl = z;
  for (int k = 0; k < 100000; ++k) {
    sum += term;
    term *= zl / (k + j + 1);
    if (term < 1e-22L * sum && k > z) break;
  }
  return static_cast<double>(sum);
}

// Rearranged series for moderate negative arguments: with x = -z > 0,
//   phi_j(-x) = e^{-x} sum_k x^k / (k! (k+j) (j-1)!)
// (all terms positive, obtained from the integral form of phi_j).
double phi_series_negative(int j, double z) {
  const long double x = -static_cast<long double>(z);
  long double sum = 0.0L, term = 1.0L / (factorial_ld(j - 1) * j);
  long double pow_term = 1.0L;
  for (int k = 0; k < 100000; ++k) {
    sum += term;
    pow_term *= x / (k + 1);
    term = pow_term / (factorial_ld(j - 1) * (k + 1 + j));
    if (term < 1e-22L * sum && k > x) break;
  }
  return static_cast<double>(expl(static_cast<long double>(z)) * sum);
}

// Upward recurrence from phi_1 = expm1(z)/z, stable once |z| dominates the
// order (relative error amplification per step is about (j+1)/|z|).
double phi_recurrence(int j, double z) {
  long double p = expm1l(static_cast<long double>(z)) / static_cast<long double>(z);
  long double fact = 1.0L;
  for (int i = 1; i < j; ++i) {
    fact *= i;
    p = (p - 1.0L / fact) / static_cast<long double>(z);
  }
  return static_cast<double>(p);
}

}  // namespace

double phi_scalar(int order, double z) {
  if (order < 0 || order > 64)
    throw std::invalid_argument("phi_scalar: order out of range");
  if (!std::isfinite(z)) throw std::invalid_argument("phi_scalar: non-finite z");
  if (order == 0) return std::exp(z);
  if (z == 0.0) return static_cast<double>(1.0L / factorial_ld(order));
  if (std::abs(z) < 0.5) return phi_taylor_small(order, z);
  if (z > 0.0) return phi_series_positive(order, z);
  if (z <= -(2.0 * order + 8.0)) return phi_recurrence(order, z);
  return phi_series_negative(order, z);
}

double phi_scaled(int order, double x) {
  if (x < 0.0) throw std::invalid_argument("phi_scaled: x must be >= 0");
  if (x < 600.0) return std::exp(-x) * phi_scalar(order, x);
  // P(j, x) = 1 to far below roundoff here.
  return std::pow(x, -static_cast<double>(order));
}

namespace {

// Diagonal Pade evaluation: exp(A) ~ (V-U)^{-1} (V+U) with U odd, V even.
Matrix pade_exp(const Matrix& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.rows());
  const Matrix a2 = a * a;
  Matrix u = Matrix::Zero(n, n), v = Matrix::Zero(n, n);
  if (b.size() == 14) {  // degree 13
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
             b[5] * a4 + b[3] * a2 + b[1] * Matrix::Identity(n, n));
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
        b[2] * a2 + b[0] * Matrix::Identity(n, n);
  } else {
    // degrees 3/5/7/9: Horner in powers of A^2
    Matrix even = Matrix::Identity(n, n);
    u = b[1] * Matrix::Identity(n, n);
    v = b[0] * Matrix::Identity(n, n);
    for (size_t k = 2; k < b.size(); k += 2) {
      even = even * a2;
      v += b[k] * even;
      if (k + 1 < b.size()) u += b[k + 1] * even;
    }
    u = a * u;
  }
  const Matrix p = v + u;
  const Matrix q = v - u;
  Eigen::PartialPivLU<Matrix> lu(q);
  return lu.solve(p);
}

}  // namespace

Matrix expm_dense(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("expm_dense: matrix not square");
  if (!m.allFinite()) throw std::invalid_argument("expm_dense: non-finite entries");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Matrix(0, 0);

  static const std::vector<double> b3 = {120, 60, 12, 1};
  static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
  static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200,
                                         25200, 1512, 56, 1};
  static const std::vector<double> b9 = {17643225600, 8821612800, 2075673600,
                                         302702400, 30270240, 2162160, 110880,
                                         3960, 90, 1};
  static const std::vector<double> b13 = {
      64764752532480000., 32382376266240000., 7771770303897600.,
      1187353796428800.,  129060195264000.,   10559470521600.,
      670442572800.,      33522128640.,       1323241920.,
      40840800.,          960960.,            16380.,
      182.,               1.};
  constexpr double theta3 = 1.495585217958292e-2;
  constexpr double theta5 = 2.539398330063230e-1;
  constexpr double theta7 = 9.504178996162932e-1;
  constexpr double theta9 = 2.097847961257068;
  constexpr double theta13 = 5.371920351148152;

  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  if (norm <= theta3) return pade_exp(m, b3);
  if (norm <= theta5) return pade_exp(m, b5);
  if (norm <= theta7) return pade_exp(m, b7);
  if (norm <= theta9) return pade_exp(m, b9);

  int s = 0;
  if (norm > theta13) s = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  if (s > 60) throw OverflowError("expm_dense: norm too large to scale");
  Matrix e = pade_exp(m / std::ldexp(1.0, s), b13);
  for (int i = 0; i < s; ++i) e = e * e;
  if (!e.allFinite()) throw OverflowError("expm_dense: result not representable");
  return e;
}

ThinSvd thin_svd(const Matrix& g) {
  const int rows = static_cast<int>(g.rows());
  const int cols = static_cast<int>(g.cols());
  if (rows < cols) throw DimensionError("thin_svd: matrix must be tall");
  if (cols > 400) throw DimensionError("thin_svd: too many columns");
  if (cols == 0) return {Matrix(rows, 0), Vector(0), Matrix(0, 0)};

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix thin_q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix w = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  Matrix v = Matrix::Identity(cols, cols);

  // One-sided Jacobi on the columns of w.  Columns at roundoff level are
  // frozen: rotating them never changes the factorization beyond eps.
  const double tol = 1e-15;
  const int max_sweeps = 60;
  double col_max = 0.0;
  for (int i = 0; i < cols; ++i) col_max = std::max(col_max, w.col(i).norm());
  const double floor2 = std::pow(col_max * 1e-15, 2);
  bool rotated = true;
  int sweep = 0;
  for (; sweep < max_sweeps && rotated; ++sweep) {
    rotated = false;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        const double app = w.col(p).squaredNorm();
        const double aqq = w.col(q).squaredNorm();
        if (app <= floor2 || aqq <= floor2) continue;
        const double apq = w.col(p).dot(w.col(q));
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Vector wp = w.col(p);
        w.col(p) = c * wp - s * w.col(q);
        w.col(q) = s * wp + c * w.col(q);
        const Vector vp = v.col(p);
        v.col(p) = c * vp - s * v.col(q);
        v.col(q) = s * vp + c * v.col(q);
      }
    }
  }
  if (sweep == max_sweeps && rotated)
    throw ConvergenceError("thin_svd: Jacobi sweeps stalled");

  std::vector<int> order(cols);
  Vector norms(cols);
  for (int i = 0; i < cols; ++i) {
    norms(i) = w.col(i).norm();
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms(a) > norms(b); });

  ThinSvd out;
  out.sigma = Vector(cols);
  out.vt = Matrix(cols, cols);
  Matrix ur(cols, cols);
  // Matches the sweep freeze level: anything this small is roundoff rank.
  const double sigma_floor = norms.maxCoeff() * 1e-14;
  int rank = 0;
  for (int i = 0; i < cols; ++i) {
    const int src = order[i];
    out.sigma(i) = norms(src);
    out.vt.row(i) = v.col(src).transpose();
    if (norms(src) > sigma_floor && norms(src) > 0.0) {
      ur.col(i) = w.col(src) / norms(src);
      rank = i + 1;
    } else {
      out.sigma(i) = 0.0;
      ur.col(i).setZero();
    }
  }
  // Complete null columns so u keeps orthonormal columns.
  for (int i = rank; i < cols; ++i) {
    for (int trial = 0; trial < cols + 1; ++trial) {
      Vector cand = Vector::Zero(cols);
      cand((i + trial) % cols) = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int kcol = 0; kcol < i; ++kcol)
          cand -= ur.col(kcol).dot(cand) * ur.col(kcol);
      const double nc = cand.norm();
      if (nc > 1e-3) {
        ur.col(i) = cand / nc;
        break;
      }
    }
  }
  out.u = thin_q * ur;
  return out;
}

BlockQr block_orthonormalize(const Matrix& b, const Matrix* against) {
  const int n = static_cast<int>(b.rows());
  const int k = static_cast<int>(b.cols());
  const int m = against ? static_cast<int>(against->cols()) : 0;
  if (against && against->rows() != n)
    throw DimensionError("block_orthonormalize: basis row mismatch");

  BlockQr out;
  out.against_coeffs = Matrix::Zero(m, k);
  Matrix q(n, k);
  Matrix r = Matrix::Zero(k, k);
  int kept = 0;
  const double defl_tol = 1e-12;

  for (int j = 0; j < k; ++j) {
    Vector w = b.col(j);
    const double norm0 = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      if (m > 0) {
        Vector c = against->transpose() * w;
        w.noalias() -= *against * c;
        out.against_coeffs.col(j) += c;
      }
      if (kept > 0) {
        Vector d = q.leftCols(kept).transpose() * w;
        w.noalias() -= q.leftCols(kept) * d;
        r.col(j).head(kept) += d;
      }
    }
    const double nw = w.norm();
    if (norm0 == 0.0 || nw <= defl_tol * norm0) {
      out.deflated.push_back(j);
    } else {
      q.col(kept) = w / nw;
      r(kept, j) = nw;
      ++kept;
    }
  }
  out.q = q.leftCols(kept);
  out.r = r.topRows(kept);
  return out;
}

}  // namespace ebk
