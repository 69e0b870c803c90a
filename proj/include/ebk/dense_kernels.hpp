#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ebk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// phi_0(z) = e^z, phi_{j+1}(z) = (phi_j(z) - phi_j(0)) / z, phi_j(0) = 1/j!.
///
/// Evaluated by cancellation-free summation: a truncated Taylor series for
/// |z| < 0.5, the plain (all-positive) series for z >= 0.5, and for negative
/// arguments either the rearranged positive series or, once |z| dominates the
/// order, the recurrence seeded with expm1.  Accurate to ~1e-14 relative over
/// j <= 8, |z| <= 50.
double phi_scalar(int order, double z);

/// e^{-x} phi_j(x) for x >= 0.  Equals P(j, x) / x^j with P the regularized
/// lower incomplete gamma function; bounded by 1/j!, no overflow for large x.
double phi_scaled(int order, double x);

/// Matrix exponential by scaling and squaring with diagonal Pade kernels
/// (degrees 3/5/7/9/13).  Throws OverflowError when the required scaling
/// exceeds the exponent budget or the result is not representable.
Matrix expm_dense(const Matrix& m);

struct ThinSvd {
  Matrix u;      ///< orthonormal columns, same shape as the input
  Vector sigma;  ///< singular values, descending
  Matrix vt;     ///< right factor, orthonormal rows
};

/// Thin SVD of a tall matrix: Householder QR followed by one-sided Jacobi
/// sweeps on the triangular factor.  Requires rows >= cols, cols <= 400.
ThinSvd thin_svd(const Matrix& g);

struct BlockQr {
  Matrix q;                    ///< kept orthonormal directions
  Matrix r;                    ///< q.cols() x b.cols() coefficients
  Matrix against_coeffs;       ///< coefficients on the `against` basis
  std::vector<int> deflated;   ///< input columns dropped as dependent
};

/// Orthonormalizes the columns of b against an (optional) existing
/// orthonormal basis and against each other, with a second pass to repair
/// loss of orthogonality.  Numerically dependent columns are dropped and
/// reported, so b - against*against_coeffs == q*r up to roundoff with the
/// deflated columns of r carrying no q row of their own.
BlockQr block_orthonormalize(const Matrix& b, const Matrix* against = nullptr);

}  // namespace ebk
