#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ebk/dense_kernels.hpp"
#include "ebk/errors.hpp"
#include "oracles.hpp"

using ebk::Matrix;
using ebk::Vector;

TEST_CASE("phi_scalar pinned values") {
  CHECK(ebk::phi_scalar(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ebk::phi_scalar(2, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ebk::phi_scalar(1, -1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(ebk::phi_scalar(1, 2.0) ==
        doctest::Approx((std::exp(2.0) - 1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("phi_scalar matches the integral oracle over [-50, 50]") {
  for (int j = 0; j <= 8; ++j) {
    for (double z = -50.0; z <= 50.0; z += 0.37) {
      const double got = ebk::phi_scalar(j, z);
      const double want = oracles::phi_integral(j, z);
      CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
    }
    for (double z : {-50.0, -22.1, -0.5001, -0.4999, 0.4999, 0.5001, 50.0}) {
      const double got = ebk::phi_scalar(j, z);
      const double want = oracles::phi_integral(j, z);
      CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
    }
  }
}

TEST_CASE("phi recurrence consistency") {
  for (int j = 0; j <= 6; ++j)
    for (double z = -50.0; z <= 50.0; z += 0.61) {
      if (z == 0.0) continue;
      const double lhs = ebk::phi_scalar(j + 1, z) * z;
      const double phi_j = ebk::phi_scalar(j, z);
      double fact = 1.0;
      for (int i = 2; i <= j; ++i) fact *= i;
      CHECK(std::abs(lhs - phi_j + 1.0 / fact) <= 1e-10 * (1.0 + std::abs(phi_j)));
    }
}

TEST_CASE("t phi_1(-w t) is nondecreasing in t") {
  for (double w : {0.0, 1.0, 10.0}) {
    double prev = 0.0;
    for (double t = 0.0; t <= 10.0; t += 0.05) {
      const double cur = t * ebk::phi_scalar(1, -w * t);
      CHECK(cur >= prev - 1e-14);
      prev = cur;
    }
  }
}

TEST_CASE("t^k e^{-wt} phi_k(wt) <= t^k / k!") {
  for (double w : {0.0, 1.0, 10.0})
    for (int k = 1; k <= 6; ++k) {
      double fact = 1.0;
      for (int i = 2; i <= k; ++i) fact *= i;
      for (double t = 0.0; t <= 10.0; t += 0.25)
        CHECK(ebk::phi_scaled(k, w * t) <= 1.0 / fact + 1e-15);
    }
}

TEST_CASE("phi_scaled agrees with the direct product and its tail limit") {
  for (int j = 1; j <= 6; ++j) {
    for (double x : {0.0, 0.3, 4.0, 90.0}) {
      CHECK(ebk::phi_scaled(j, x) ==
            doctest::Approx(std::exp(-x) * ebk::phi_scalar(j, x)).epsilon(1e-12));
    }
    CHECK(ebk::phi_scaled(j, 800.0) ==
          doctest::Approx(std::pow(800.0, -j)).epsilon(1e-10));
  }
}

TEST_CASE("expm_dense of zero and nilpotent matrices") {
  CHECK((ebk::expm_dense(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() <=
        1e-15);
  Matrix n2(2, 2);
  n2 << 0, 1, 0, 0;
  Matrix e = ebk::expm_dense(n2);
  Matrix want(2, 2);
  want << 1, 1, 0, 1;
  CHECK((e - want).norm() <= 1e-15);
}

TEST_CASE("expm_dense matches a 30-term Taylor oracle for small norms") {
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    Matrix m = oracles::random_matrix(5, 5, seed);
    m *= 0.9 / m.cwiseAbs().colwise().sum().maxCoeff();
    Matrix taylor = Matrix::Identity(5, 5);
    Matrix term = Matrix::Identity(5, 5);
    for (int k = 1; k <= 30; ++k) {
      term = term * m / static_cast<double>(k);
      taylor += term;
    }
    CHECK((ebk::expm_dense(m) - taylor).norm() <= 1e-12 * taylor.norm());
  }
}

TEST_CASE("expm_dense inverse identity up to norm 10") {
  for (unsigned seed : {5u, 6u}) {
    for (double scale : {0.5, 3.0, 10.0}) {
      Matrix m = oracles::random_matrix(6, 6, seed);
      m *= scale / m.cwiseAbs().colwise().sum().maxCoeff();
      Matrix prod = ebk::expm_dense(m) * ebk::expm_dense(-m);
      CHECK((prod - Matrix::Identity(6, 6)).norm() <= 1e-10);
    }
  }
}

TEST_CASE("expm_dense overflow signalling") {
  Matrix m = Matrix::Identity(4, 4) * 1e20;
  CHECK_THROWS_AS(ebk::expm_dense(m), ebk::OverflowError);
}

TEST_CASE("thin_svd of rank-1 and identity") {
  Vector w = oracles::random_matrix(30, 1, 11u).col(0);
  Vector s = oracles::random_matrix(4, 1, 12u).col(0);
  Matrix g = w * s.transpose();
  auto svd = ebk::thin_svd(g);
  CHECK(svd.sigma(0) == doctest::Approx(w.norm() * s.norm()).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(svd.sigma(i) <= 1e-12 * svd.sigma(0));

  auto id = ebk::thin_svd(Matrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(id.sigma(i) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("thin_svd reconstruction and orthogonality") {
  for (unsigned seed : {21u, 22u, 23u}) {
    Matrix g = oracles::random_matrix(50, 6, seed);
    auto svd = ebk::thin_svd(g);
    const Matrix rec = svd.u * svd.sigma.asDiagonal() * svd.vt;
    CHECK((rec - g).norm() <= 1e-12 * g.norm());
    CHECK((svd.u.transpose() * svd.u - Matrix::Identity(6, 6)).norm() <= 1e-12);
    CHECK((svd.vt * svd.vt.transpose() - Matrix::Identity(6, 6)).norm() <= 1e-12);
    for (int i = 1; i < svd.sigma.size(); ++i) CHECK(svd.sigma(i) <= svd.sigma(i - 1));
  }
}

TEST_CASE("thin_svd keeps u orthonormal on rank-deficient input") {
  Matrix g = oracles::random_matrix(20, 5, 31u);
  g.col(3) = 2.0 * g.col(1);
  g.col(4) = g.col(0) - g.col(2);
  auto svd = ebk::thin_svd(g);
  CHECK((svd.u.transpose() * svd.u - Matrix::Identity(5, 5)).norm() <= 1e-10);
  CHECK(svd.sigma(3) <= 1e-10 * svd.sigma(0));
  const Matrix rec = svd.u * svd.sigma.asDiagonal() * svd.vt;
  CHECK((rec - g).norm() <= 1e-10 * g.norm());
}

TEST_CASE("block_orthonormalize leaves an orthonormal block unchanged") {
  Matrix b = oracles::random_matrix(40, 4, 41u);
  Eigen::HouseholderQR<Matrix> qr(b);
  Matrix q0 = qr.householderQ() * Matrix::Identity(40, 4);
  auto res = ebk::block_orthonormalize(q0);
  CHECK(res.deflated.empty());
  CHECK((res.q - q0 * res.r.diagonal().cwiseSign().asDiagonal()).norm() <= 1e-12);
  CHECK((res.r.cwiseAbs() - Matrix::Identity(4, 4)).norm() <= 1e-12);
}

TEST_CASE("block_orthonormalize reports exact dependence") {
  Matrix b = oracles::random_matrix(30, 3, 42u);
  b.col(2) = b.col(0);
  auto res = ebk::block_orthonormalize(b);
  CHECK(res.deflated.size() == 1);
  CHECK(res.q.cols() == 2);
  CHECK((b - res.q * res.r).norm() <= 1e-12 * b.norm());
}

TEST_CASE("block_orthonormalize orthogonality and against-basis splitting") {
  Matrix full = oracles::random_matrix(100, 9, 43u);
  auto first = ebk::block_orthonormalize(full.leftCols(4));
  Matrix b = full.rightCols(5);
  auto res = ebk::block_orthonormalize(b, &first.q);
  CHECK((res.q.transpose() * res.q - Matrix::Identity(5, 5)).norm() <= 1e-12);
  CHECK((first.q.transpose() * res.q).norm() <= 1e-12);
  const Matrix rec = first.q * res.against_coeffs + res.q * res.r;
  CHECK((rec - b).norm() <= 1e-12 * b.norm());
}
