#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ebk/ebk_linear.hpp"
#include "ebk/problems.hpp"
#include "ebk/source_model.hpp"
#include "oracles.hpp"

using ebk::LowRankSource;
using ebk::Matrix;
using ebk::SampleGrid;
using ebk::Vector;

TEST_CASE("chebyshev grid pinned points") {
  auto g4 = SampleGrid::chebyshev(4, 2.0);
  REQUIRE(g4.size() == 4);
  CHECK(g4.points[0] == 0.0);
  CHECK(g4.points[1] == doctest::Approx(1.0 - std::cos(M_PI / 4)).epsilon(1e-15));
  CHECK(g4.points[2] == doctest::Approx(1.0 - std::cos(3 * M_PI / 4)).epsilon(1e-15));
  CHECK(g4.points[3] == 2.0);

  auto g3 = SampleGrid::chebyshev(3, 1.0);
  CHECK(g3.points[0] == 0.0);
  CHECK(g3.points[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g3.points[2] == 1.0);
}

TEST_CASE("chebyshev grid is strictly increasing inside [0, T]") {
  auto g = SampleGrid::chebyshev(100, 0.5);
  REQUIRE(g.size() == 100);
  CHECK(g.points.front() == 0.0);
  CHECK(g.points.back() == 0.5);
  for (int j = 1; j < 100; ++j) CHECK(g.points[j] > g.points[j - 1]);
}

TEST_CASE("constant source compresses to exact rank 1") {
  Vector w = oracles::random_matrix(40, 1, 5u).col(0);
  auto grid = SampleGrid::chebyshev(30, 1.0);
  auto s = LowRankSource::compress([&](double) { return w; }, grid, 1);
  CHECK(s.sigma_tail() <= 1e-14 * w.norm());
  for (double t : {0.0, 0.31, 1.0})
    CHECK((s.value_at(t) - w).norm() <= 1e-13 * w.norm());
}

TEST_CASE("two-term trigonometric source compresses to exact rank 2") {
  Vector w1 = oracles::random_matrix(50, 1, 6u).col(0);
  Vector w2 = oracles::random_matrix(50, 1, 7u).col(0);
  auto grid = SampleGrid::chebyshev(40, 3.0);
  double gnorm = 0.0;
  for (double t : grid.points)
    gnorm = std::max(gnorm, (w1 * std::sin(t) + w2 * std::cos(t)).norm());
  auto s = LowRankSource::compress(
      [&](double t) { return Vector(w1 * std::sin(t) + w2 * std::cos(t)); }, grid, 2);
  CHECK(s.sigma_tail() <= 1e-12 * gnorm);
  CHECK((s.basis().transpose() * s.basis() - Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("evaluation: stored samples, midpoints, linear reproduction") {
  Vector a = oracles::random_matrix(25, 1, 8u).col(0);
  Vector b = oracles::random_matrix(25, 1, 9u).col(0);
  auto grid = SampleGrid::chebyshev(12, 2.0);
  auto s = LowRankSource::compress([&](double t) { return Vector(a + t * b); }, grid, 2);
  // exact at the nodes
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid.points[j];
    CHECK((s.basis() * s.coefficient_samples().col(j) - (a + t * b)).norm() <=
          1e-12 * (a + t * b).norm());
    CHECK((s.coefficients_at(t) - s.coefficient_samples().col(j)).norm() == 0.0);
  }
  // midpoint is the sample average, and a linear-in-t source is reproduced
  // exactly anywhere
  const double tm = 0.5 * (grid.points[3] + grid.points[4]);
  CHECK((s.coefficients_at(tm) - 0.5 * (s.coefficient_samples().col(3) +
                                        s.coefficient_samples().col(4)))
            .norm() <= 1e-14 * s.coefficients_at(tm).norm());
  for (double t : {0.05, 0.777, 1.3, 1.99})
    CHECK((s.value_at(t) - (a + t * b)).norm() <= 1e-11 * (a + t * b).norm());
  CHECK_THROWS_AS(s.coefficients_at(2.5), std::domain_error);
}

TEST_CASE("column approximation error is bounded by sigma_tail * sqrt(n_s)") {
  auto grid = SampleGrid::chebyshev(60, 1.0);
  std::vector<Vector> cols;
  Matrix mix = oracles::random_matrix(80, 5, 10u);
  auto fn = [&](double t) {
    Vector c(5);
    c << std::sin(t), std::cos(3 * t), std::exp(-t), t * t, 1.0;
    return Vector(mix * c);
  };
  for (int m : {1, 2, 3, 4}) {
    auto s = LowRankSource::compress(fn, grid, m);
    double worst = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
      const double t = grid.points[j];
      worst = std::max(worst, (s.basis() * s.coefficient_samples().col(j) - fn(t)).norm());
    }
    CHECK(worst <= s.sigma_tail() * std::sqrt(static_cast<double>(grid.size())) + 1e-13);
  }
}

TEST_CASE("wide sample matrices (dim < n_s) compress correctly") {
  auto grid = SampleGrid::chebyshev(90, 1.0);
  Matrix mix = oracles::random_matrix(30, 3, 11u);
  auto fn = [&](double t) {
    Vector c(3);
    c << 1.0, std::sin(2 * t), std::cos(5 * t);
    return Vector(mix * c);
  };
  auto s = LowRankSource::compress(fn, grid, 3);
  CHECK(s.basis().rows() == 30);
  CHECK((s.basis().transpose() * s.basis() - Matrix::Identity(3, 3)).norm() <= 1e-12);
  CHECK(s.sigma_tail() <= 1e-11 * mix.norm());
  // exact at the nodes; interior points carry the piecewise-linear error
  for (int j : {0, 17, 89})
    CHECK((s.value_at(grid.points[j]) - fn(grid.points[j])).norm() <=
          1e-10 * fn(grid.points[j]).norm());
  CHECK((s.value_at(0.4) - fn(0.4)).norm() <= 1e-2 * fn(0.4).norm());
}

TEST_CASE("Burgers second-iteration source has a small relative tail") {
  // One waveform relaxation step by hand, then the k=1 source: the paper
  // reports a truncation indicator of order 1e-6 for T = 0.5 at m = 7.
  auto p = ebk::burgers_build(500, 3e-4, 0.5);
  auto ode = p.ode();
  const Vector v = ode.initial;
  auto grid = SampleGrid::chebyshev(100, 0.5);

  auto a0 = ode.linear_part(v);
  auto src0 = LowRankSource::compress(
      [&](double) { return ode.remainder(v, v); }, grid, 1);
  ebk::EbkParams ep;
  ep.gamma = 0.5 / 10.0;
  ep.tol = 1e-3;
  auto y1 = ebk::ebk_solve(a0, v, src0, ep);

  const Vector anchor = y1.final_state();
  Matrix samples(500, 100);
  for (int j = 0; j < 100; ++j)
    samples.col(j) = ode.remainder(y1.eval(grid.points[j]), anchor);
  auto svd = ebk::thin_svd(samples);
  const double ratio = svd.sigma(7) / svd.sigma(0);
  CHECK(ratio < 1e-5);
  CHECK(ratio > 1e-8);
}
