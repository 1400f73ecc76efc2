#include "doctest.h"

#include "spectraforge/errors.hpp"
#include "spectraforge/graph.hpp"
#include "spectraforge/spco.hpp"
#include "spectraforge/transport.hpp"

#include <cmath>
#include <random>

using namespace spectraforge;

namespace {

Matrix random_kernel(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  Matrix k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k(i, j) = unif(rng);
  }
  return k;
}

std::pair<Vector, Vector> random_marginals(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Vector a(n), b(n);
  for (int i = 0; i < n; ++i) a(i) = unif(rng);
  for (int i = 0; i < n; ++i) b(i) = unif(rng);
  b *= a.sum() / b.sum();
  return {a, b};
}

}  // namespace

TEST_CASE("identity kernel with uniform marginals is already scaled") {
  Matrix k = Matrix::Identity(3, 3);
  Vector ones = Vector::Ones(3);
  SinkhornResult r = sinkhorn_scale(k, ones, ones, 1);
  CHECK((r.scaled - k).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(r.row_residual < 1e-14);
  CHECK(r.col_residual < 1e-14);
}

TEST_CASE("fixed-sweep scaling matches an independent loop oracle") {
  int n = 5, iters = 4;
  Matrix k = random_kernel(n, 31);
  auto [a, b] = random_marginals(n, 32);
  SinkhornResult r = sinkhorn_scale(k, a, b, iters);

  Vector u = Vector::Constant(n, 1.0 / n);
  for (int it = 0; it < iters; ++it) {
    Vector kt_u = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) kt_u(j) += k(i, j) * u(i);
    }
    Vector t(n);
    for (int j = 0; j < n; ++j) t(j) = b(j) / kt_u(j);
    Vector denom = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) denom(i) += k(i, j) / a(i) * t(j);
    }
    for (int i = 0; i < n; ++i) u(i) = 1.0 / denom(i);
  }
  CHECK((r.u - u).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double vj = r.v(j);
      CHECK(r.scaled(i, j) == doctest::Approx(u(i) * k(i, j) * vj));
    }
  }
}

TEST_CASE("the scaled plan ignores a global kernel rescale") {
  Matrix k = random_kernel(4, 41);
  auto [a, b] = random_marginals(4, 42);
  SinkhornResult r1 = sinkhorn_scale(k, a, b, 6);
  SinkhornResult r2 = sinkhorn_scale(Matrix(5.0 * k), a, b, 6);
  CHECK((r1.scaled - r2.scaled).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("more sweeps do not worsen the residuals") {
  Matrix k = random_kernel(6, 51);
  auto [a, b] = random_marginals(6, 52);
  SinkhornResult early = sinkhorn_scale(k, a, b, 1);
  SinkhornResult late = sinkhorn_scale(k, a, b, 20);
  double e = std::max(early.row_residual, early.col_residual);
  double l = std::max(late.row_residual, late.col_residual);
  CHECK(l <= e + 1e-12);
  CHECK(l < 1e-8);
}

TEST_CASE("converge mode stops at the tolerance") {
  Matrix k = random_kernel(8, 61);
  auto [a, b] = random_marginals(8, 62);
  SinkhornResult r = sinkhorn_converge(k, a, b, 1e-10, 500);
  CHECK(std::max(r.row_residual, r.col_residual) <= 1e-10);
  CHECK(r.iterations <= 500);
}

TEST_CASE("log-domain scaling mirrors the linear path") {
  Matrix k = random_kernel(5, 71);
  auto [a, b] = random_marginals(5, 72);
  SinkhornResult lin = sinkhorn_scale(k, a, b, 5);
  SinkhornResult log = sinkhorn_scale_log(Matrix(k.array().log()), a, b, 5);
  CHECK((lin.scaled - log.scaled).cwiseAbs().maxCoeff() < 1e-10);

  // masked zeros are preserved by both paths
  Matrix masked = k;
  masked(0, 1) = masked(2, 3) = 0.0;
  SinkhornResult mlin = sinkhorn_scale(masked, a, b, 5);
  Matrix log_masked = masked.array().log();  // zeros map to -inf
  SinkhornResult mlog = sinkhorn_scale_log(log_masked, a, b, 5);
  CHECK(mlin.scaled(0, 1) == 0.0);
  CHECK(mlog.scaled(0, 1) == 0.0);
  CHECK((mlin.scaled - mlog.scaled).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("extreme exponents survive only on the log path") {
  // +750 overflows exp() to inf, poisoning the linear recursion with NaN
  Matrix e(2, 2);
  e << 750.0, -750.0, -750.0, 750.0;
  Vector ones = Vector::Ones(2);
  CHECK_THROWS_AS(sinkhorn_scale(Matrix(e.array().exp()), ones, ones, 3),
                  NumericalError);
  SinkhornResult r = sinkhorn_scale_log(e, ones, ones, 10);
  CHECK(r.scaled.allFinite());
  CHECK(std::max(r.row_residual, r.col_residual) < 1e-8);
  CHECK(r.scaled(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("scaling validates marginals and kernel support") {
  Matrix k = random_kernel(3, 81);
  Vector a = Vector::Ones(3), b = Vector::Ones(3);
  b(0) = 2.0;  // sums differ
  CHECK_THROWS_AS(sinkhorn_scale(k, a, b, 1), ValidationError);
  b = Vector::Ones(3);
  a(1) = 0.0;
  CHECK_THROWS_AS(sinkhorn_scale(k, a, b, 1), ValidationError);
  a(1) = 1.0;
  Matrix zero_row = k;
  zero_row.row(2).setZero();
  CHECK_THROWS_AS(sinkhorn_scale(zero_row, a, b, 1), ValidationError);
  Matrix negative = k;
  negative(0, 0) = -0.1;
  CHECK_THROWS_AS(sinkhorn_scale(negative, a, b, 1), ValidationError);
  CHECK_THROWS_AS(sinkhorn_scale(k, a, b, 0), ValidationError);
}

TEST_CASE("projective metric closed forms") {
  Vector x(2), y(2);
  x << 1.0, 2.0;
  y << 2.0, 1.0;
  CHECK(hilbert_metric(x, y) == doctest::Approx(std::log(4.0)));
  CHECK(hilbert_metric(x, x) == doctest::Approx(0.0));
  CHECK(hilbert_metric(x, Vector(3.0 * x)) == doctest::Approx(0.0));
  Vector bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(hilbert_metric(x, bad), ValidationError);
  CHECK_THROWS_AS(hilbert_metric(x, Vector::Ones(3)), ValidationError);
}

TEST_CASE("contraction ratio closed form and the contraction property") {
  Vector a(3), b(3);
  a << 1.0, 2.0, 0.5;
  b << 0.3, 1.0, 2.0;
  Matrix rank_one = a * b.transpose();
  CHECK(birkhoff_contraction(rank_one) == doctest::Approx(0.0).epsilon(1e-12));

  Matrix k(2, 2);
  k << 1.0, 2.0, 3.0, 1.0;
  double aleph = 6.0;
  double expected = (std::sqrt(aleph) - 1.0) / (std::sqrt(aleph) + 1.0);
  CHECK(birkhoff_contraction(k) == doctest::Approx(expected));
  CHECK(birkhoff_contraction(k) ==
        doctest::Approx(std::tanh(std::log(aleph) / 4.0)));

  // d(Kx, Ky) <= kappa d(x, y) on positive vectors
  Matrix big = random_kernel(6, 91);
  double kappa = birkhoff_contraction(big);
  std::mt19937_64 rng(92);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(6), y(6);
    for (int i = 0; i < 6; ++i) {
      x(i) = unif(rng);
      y(i) = unif(rng);
    }
    CHECK(hilbert_metric(Vector(big * x), Vector(big * y)) <=
          kappa * hilbert_metric(x, y) + 1e-12);
  }

  CHECK_THROWS_AS(birkhoff_contraction(Matrix::Ones(65, 65)), ValidationError);
  Matrix with_zero = Matrix::Ones(3, 3);
  with_zero(1, 2) = 0.0;
  CHECK_THROWS_AS(birkhoff_contraction(with_zero), ValidationError);
}

TEST_CASE("sensitivity bound audit on a small transport epoch") {
  Graph path = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  Matrix lap = normalized_laplacian(path);
  CostMatrix cost = build_cost(lap, 0.02);
  auto [a, b] = marginals(path, MarginalMode::degree);
  Matrix prev = initial_plan(a, b);
  double eps = 0.1;
  Matrix kernel = build_kernel(cost, prev, eps, PlanSign::plus);
  Matrix m = m_matrix(cost, prev);
  Matrix next = sinkhorn_scale(kernel, a, b, 3).scaled;
  ScopeMask mask = scope_mask(path, 2);
  BoundReport rep =
      theorem5_bound_report(kernel, a, b, cost.c, eps, m, prev, next, mask);
  CHECK(rep.holds);
  CHECK(rep.violations == 0);
  CHECK(rep.skipped == 2);  // the (0,2) pair has zero cost both ways
  CHECK(rep.checked == 4);
  CHECK(rep.min_slack > 0.0);
  CHECK(rep.gamma < 1.0);
}

TEST_CASE("a vacuous contraction ratio is a numerical error") {
  Matrix k(2, 2);
  k << 1.0, 1e300, 1e300, 1.0;
  Vector ones = Vector::Ones(2);
  Matrix c = Matrix::Ones(2, 2);
  ScopeMask mask;
  mask.s = Matrix::Ones(2, 2) - Matrix::Identity(2, 2);
  mask.hops = 1;
  CHECK_THROWS_AS(
      theorem5_bound_report(k, ones, ones, c, 0.1, Matrix::Zero(2, 2),
                            Matrix::Ones(2, 2), Matrix::Ones(2, 2), mask),
      NumericalError);
}
