#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ebk/errors.hpp"
#include "ebk/problems.hpp"
#include "ebk/sparse_core.hpp"
#include "oracles.hpp"

using ebk::Matrix;
using ebk::SparseMatrix;
using ebk::Vector;

TEST_CASE("spmv identity and interior Laplacian null vector") {
  auto id = SparseMatrix::identity(5);
  Vector x = oracles::random_matrix(5, 1, 1u).col(0);
  CHECK((id.apply(x) - x).norm() == 0.0);

  // (-1, 2, -1)/dx^2 stencil annihilates constants away from the boundary
  const int n = 20;
  const double w = 1.0 / ((n + 1.0) * (n + 1.0));
  std::vector<ebk::Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0 / w});
    if (i > 0) t.push_back({i, i - 1, -1.0 / w});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0 / w});
  }
  auto lap = SparseMatrix::from_triplets(n, n, std::move(t));
  Vector ones = Vector::Ones(n);
  Vector y = lap.apply(ones);
  for (int i = 1; i + 1 < n; ++i) CHECK(y(i) == 0.0);
}

TEST_CASE("spmv matches the dense product oracle") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ebk::Triplet> t;
  Matrix dense = Matrix::Zero(20, 20);
  for (int k = 0; k < 80; ++k) {
    const int i = rng() % 20, j = rng() % 20;
    const double v = u(rng);
    t.push_back({i, j, v});
    dense(i, j) += v;  // duplicates must accumulate
  }
  auto sp = SparseMatrix::from_triplets(20, 20, std::move(t));
  for (unsigned s = 0; s < 5; ++s) {
    Vector x = oracles::random_matrix(20, 1, s).col(0);
    CHECK((sp.apply(x) - dense * x).norm() <= 1e-14 * (dense * x).norm());
  }
  Matrix xb = oracles::random_matrix(20, 3, 9u);
  CHECK((sp.apply_block(xb) - dense * xb).norm() <= 1e-14 * (dense * xb).norm());
  CHECK_THROWS_AS(sp.apply(Vector::Zero(4)), ebk::DimensionError);
}

TEST_CASE("one_norm") {
  CHECK(SparseMatrix::identity(7).one_norm() == 1.0);
  Matrix dense = oracles::random_matrix(15, 15, 3u);
  auto sp = oracles::to_sparse(dense);
  CHECK(sp.one_norm() ==
        doctest::Approx(dense.cwiseAbs().colwise().sum().maxCoeff()).epsilon(1e-14));
}

TEST_CASE("transpose, symmetric part, scaled, plus") {
  Matrix dense = oracles::random_matrix(12, 12, 4u);
  auto sp = oracles::to_sparse(dense);
  CHECK((oracles::to_sparse(dense.transpose()).apply(Vector::Ones(12)) -
         sp.transpose().apply(Vector::Ones(12)))
            .norm() <= 1e-14);
  Vector x = oracles::random_matrix(12, 1, 5u).col(0);
  CHECK((sp.symmetric_part().apply(x) - 0.5 * (dense + dense.transpose()) * x).norm() <=
        1e-14 * x.norm());
  CHECK((sp.scaled(-2.5).apply(x) + 2.5 * dense * x).norm() <= 1e-13 * x.norm());
  Matrix dense2 = oracles::random_matrix(12, 12, 6u);
  CHECK((sp.plus(oracles::to_sparse(dense2)).apply(x) - (dense + dense2) * x).norm() <=
        1e-13 * x.norm());
  Vector d = oracles::random_matrix(12, 1, 7u).col(0);
  CHECK((sp.plus_diagonal(d, -1.0).apply(x) - (dense * x - d.cwiseProduct(x))).norm() <=
        1e-13 * x.norm());
}

TEST_CASE("factorize_shifted of the zero and diagonal matrices") {
  const int n = 6;
  auto zero = SparseMatrix::from_triplets(n, n, {{0, 0, 0.0}});
  ebk::Factorization fz(zero, 3.0);
  Vector b = oracles::random_matrix(n, 1, 8u).col(0);
  CHECK((fz.solve(b) - b).norm() <= 1e-14);

  std::vector<ebk::Triplet> t;
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0 + i});
  auto diag = SparseMatrix::from_triplets(n, n, std::move(t));
  const double gamma = 0.7;
  ebk::Factorization fd(diag, gamma);
  Vector x = fd.solve(b);
  for (int i = 0; i < n; ++i)
    CHECK(x(i) == doctest::Approx(b(i) / (1.0 + gamma * (1.0 + i))).epsilon(1e-14));
  CHECK(fd.applications() == 1);
  fd.solve_block(oracles::random_matrix(n, 4, 9u));
  CHECK(fd.applications() == 5);
}

TEST_CASE("factorization round trip on the Burgers matrix") {
  auto p = ebk::burgers_build(500, 3e-4, 0.5);
  const auto a = p.diffusion.plus(p.convection(p.initial()));
  const double gamma = 0.5 / 10.0;
  ebk::Factorization f(a, gamma);
  Vector b = oracles::random_matrix(500, 1, 10u).col(0);
  Vector x = f.solve(b);
  Vector back = x + gamma * a.apply(x);
  CHECK((back - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("singular shifted system is reported") {
  auto neg = SparseMatrix::identity(4).scaled(-1.0);
  CHECK_THROWS_AS(ebk::Factorization(neg, 1.0), ebk::SingularMatrixError);
}

TEST_CASE("omega_estimate on a diagonal matrix") {
  auto d = SparseMatrix::from_triplets(3, 3, {{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, 5.0}});
  CHECK(ebk::omega_estimate(d) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("omega_estimate reproduces the Burgers decay rates") {
  for (double nu : {3e-4, 3e-5}) {
    const double expect = nu == 3e-4 ? 2.96e-3 : 2.96e-4;
    for (int n : {500, 1000, 2000}) {
      auto p = ebk::burgers_build(n, nu, 1.0);
      const double w = ebk::omega_estimate(p.diffusion);
      CHECK(std::abs(w - expect) <= 0.02 * expect);
    }
  }
}

TEST_CASE("omega_estimate is grid stable for Burgers") {
  auto coarse = ebk::burgers_build(500, 3e-4, 1.0);
  auto fine = ebk::burgers_build(4000, 3e-4, 1.0);
  const double w1 = ebk::omega_estimate(coarse.diffusion);
  const double w2 = ebk::omega_estimate(fine.diffusion);
  CHECK(std::abs(w1 - w2) <= 0.01 * std::abs(w2));
}

TEST_CASE("matrix market dump") {
  auto sp = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.5}, {1, 0, -2.0}});
  std::ostringstream os;
  sp.write_matrix_market(os);
  CHECK(os.str() ==
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.5\n2 1 -2\n");
}
