#include <doctest.h>

#include <cmath>

#include "accr/models.hpp"
#include "accr/pack.hpp"
#include "accr/riemann.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace accr;
using testing::ExprGen;
using testing::fd_curvature;
using testing::fd_gamma;
using testing::metric_at;

namespace {

// g = I + M M^T with small random entries: positive definite everywhere.
MetricField random_metric(ExprGen& gen, int dim, int depth) {
  std::vector<Expr> m;
  for (int k = 0; k < dim * dim; ++k)
    m.push_back(0.3 * sin(gen.tree(depth)));
  MetricField g(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      Expr v = i == j ? Expr(1.0) : Expr(0.0);
      for (int k = 0; k < dim; ++k)
        v += m[i * dim + k] * m[j * dim + k];
      g.set(i, j, v);
    }
  return g;
}

} // namespace

TEST_SUITE("riemann") {

TEST_CASE("determinant and inverse against Eigen") {
  ExprGen gen(41, 4);
  MetricField g = random_metric(gen, 4, 2);
  Expr det = determinant(g);
  auto inv = adjugate_inverse(g);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = gen.point();
    Eigen::MatrixXd m = metric_at(g, p);
    CHECK(eval(det, p).real() == doctest::Approx(m.determinant()).epsilon(1e-12));
    Eigen::MatrixXd oracle = m.ldlt().solve(Eigen::MatrixXd::Identity(4, 4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(eval(inv[i * 4 + j], p).real() - oracle(i, j)) < 1e-12);
  }
}

TEST_CASE("known inverse takes precedence") {
  MetricField g = MetricField::identity(3);
  g.set_known_inverse({1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0});
  auto inv = inverse_metric(g);
  CHECK(inv[0].is_one());
}

TEST_CASE("positive definiteness is checked, not assumed") {
  MetricField g = MetricField::identity(3);
  g.set(1, 1, Expr::var(1)); // negative for x < 0
  PointSet ok(3, {0.0, 0.5, 0.0});
  PointSet bad(3, {0.0, 0.5, 0.0, 0.0, -0.5, 0.0});
  CHECK_NOTHROW(require_positive_definite(g, ok));
  CHECK_THROWS_AS(require_positive_definite(g, bad), DomainError);
}

TEST_CASE("Christoffel symbols against finite differences") {
  ExprGen gen(43, 3);
  MetricField g = random_metric(gen, 3, 2);
  ConnectionData conn = christoffel(g);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = gen.point();
    auto oracle = fd_gamma(g, p, 1e-5);
    for (std::size_t q = 0; q < oracle.size(); ++q)
      CHECK(std::abs(eval(conn.symbols()[q], p).real() - oracle[q]) < 1e-7);
  }
}

TEST_CASE("metric compatibility and first Bianchi identity") {
  ExprGen gen(47, 3);
  MetricField g = random_metric(gen, 3, 2);
  ConnectionData conn = christoffel(g);
  CurvatureData curv = curvature(conn);
  const int n = 3;
  for (int trial = 0; trial < 5; ++trial) {
    auto p = gen.point();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Expr v = differentiate(g(i, j), k);
          for (int l = 0; l < n; ++l)
            v = v - conn(l, k, i) * g(l, j) - conn(l, k, j) * g(i, l);
          CHECK(std::abs(eval(v, p)) <= 1e-9);
        }
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            Expr b = curv(l, i, j, k) + curv(l, j, k, i) + curv(l, k, i, j);
            CHECK(std::abs(eval(b, p)) <= 1e-8);
          }
  }
}

TEST_CASE("curvature against a nested finite-difference oracle") {
  ExprGen gen(53, 3);
  MetricField g = random_metric(gen, 3, 2);
  CurvatureData curv = curvature(christoffel(g));
  const int n = 3;
  for (int trial = 0; trial < 20; ++trial) {
    auto p = gen.point();
    auto oracle = fd_curvature(g, p);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            CHECK(std::abs(eval(curv(l, i, j, k), p).real() - oracle[((l * n + i) * n + j) * n + k]) <=
                  1e-4);
  }
}

TEST_CASE("numeric curvature matches the symbolic route") {
  ExprGen gen(59, 3);
  MetricField g = random_metric(gen, 3, 2);
  ConnectionData conn = christoffel(g);
  CurvatureData curv = curvature(conn);
  NumericCurvature num(g);
  const int n = 3;
  for (int trial = 0; trial < 5; ++trial) {
    auto p = gen.point();
    auto jet = num.at(p);
    for (int k = 0; k < n * n * n; ++k)
      CHECK(std::abs(jet.gamma[k] - eval(conn.symbols()[k], p).real()) < 1e-11);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            CHECK(std::abs(jet.curvature[((l * n + i) * n + j) * n + k] -
                           eval(curv(l, i, j, k), p).real()) < 1e-10);
  }
}

TEST_CASE("round sphere has sectional curvature one") {
  // g = dt^2 + sin(t)^2 dx^2 on a 2-chart; R(d_t, d_x) d_x = sin^2 d_t
  MetricField g(2);
  g.set(0, 0, 1.0);
  g.set(1, 1, pow(sin(Expr::var(0)), 2));
  CurvatureData curv = curvature(christoffel(g));
  std::vector<double> p = {1.0, 0.3};
  CHECK(eval(curv(0, 0, 1, 1), p).real() == doctest::Approx(std::pow(std::sin(1.0), 2)));
  CHECK(eval(curv(0, 1, 0, 1), p).real() == doctest::Approx(-std::pow(std::sin(1.0), 2)));
}

TEST_CASE("orthonormal basis and tensor norm") {
  Eigen::MatrixXd g(3, 3);
  g << 2, 0.3, 0, 0.3, 1, 0.1, 0, 0.1, 1.5;
  Eigen::MatrixXd b = orthonormal_basis(g);
  CHECK((b.transpose() * g * b - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-13);
  // |Id|^2 = dim
  CHECK(tensor_norm(g, Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("hand-derived values for the mu = 0 model") {
  Model m = build_model({Realization::ModelFrame, 1, 0.0});
  ConnectionData conn = christoffel(m.structure.g);
  CurvatureData curv = curvature(conn);
  const int T = 0, X = 1;
  for (double tv : {-0.5, 0.0, 0.7}) {
    std::vector<double> p = {tv, 0.2, -0.4};
    CHECK(std::abs(eval(conn(X, T, X), p).real() + 1.0) < 1e-12);
    CHECK(std::abs(eval(conn(T, X, X), p).real() - std::exp(-2 * tv)) < 1e-12);
    // R(xi, X) xi = X
    Eigen::VectorXcd r = curvature_apply(curv, m.frame.xi, m.frame.x[0], m.frame.xi, p);
    CHECK(max_abs(r - eval_vector(m.frame.x[0], p)) < 1e-9);
  }
}

} // TEST_SUITE
