#include <doctest.h>

#include "accr/fields.hpp"
#include "accr/pack.hpp"
#include "support.hpp"

using namespace accr;
using testing::ExprGen;

namespace {
const Expr t = Expr::var(0);
const Expr x = Expr::var(1);
const Expr y = Expr::var(2);

double gap(const VectorField& a, const VectorField& b, std::span<const double> p) {
  return max_abs(eval_vector(a, p) - eval_vector(b, p));
}
double gap(const Tensor11& a, const Tensor11& b, std::span<const double> p) {
  return max_abs(eval_matrix(a, p) - eval_matrix(b, p));
}
} // namespace

TEST_SUITE("fields") {

TEST_CASE("bracket of linear fields") {
  VectorField a({0.0, 0.0, x}); // x d/dy
  VectorField b({0.0, y, 0.0}); // y d/dx
  VectorField expect({0.0, x, -y});
  std::vector<double> p = {0.1, 0.7, -0.2};
  CHECK(gap(lie_bracket(a, b), expect, p) < 1e-15);
}

TEST_CASE("vector field action and coordinate fields") {
  VectorField d1 = VectorField::coordinate(3, 1);
  CHECK(eval(d1.apply(x * y), std::vector<double>{0, 2, 5}).real() == doctest::Approx(5));
  VectorField v({1.0, t, x});
  CHECK(eval(v.apply(x * y), std::vector<double>{2, 3, 5}).real() == doctest::Approx(2 * 5 + 3 * 3));
}

TEST_CASE("exterior derivative normalization") {
  KForm eta = one_form({0.0, 0.0, x}); // x dy
  KForm d = exterior_derivative(eta);
  std::vector<double> p = {0, 0.3, 0.4};
  CHECK(eval(d(1, 2), p).real() == doctest::Approx(0.5));
  CHECK(eval(d(2, 1), p).real() == doctest::Approx(-0.5));
  KForm w = wedge(one_form({0.0, 1.0, 0.0}), one_form({0.0, 0.0, 1.0}));
  CHECK(eval(w(1, 2), p).real() == doctest::Approx(0.5));
  // d(x dy ^ dt)-style 2-form: d(f dx^dy) with f = t gives 1/3 of dt^dx^dy (1/2 each)
  KForm two(2, 3);
  two.set(1, 2, t);
  KForm d2 = exterior_derivative(two);
  CHECK(eval(d2(0, 1, 2), p).real() == doctest::Approx(1.0 / 3.0));
  CHECK(eval(d2(1, 0, 2), p).real() == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("d of a one-form agrees with the invariant formula") {
  ExprGen gen(31, 3);
  for (int trial = 0; trial < 10; ++trial) {
    KForm eta = gen.one_form_(2);
    VectorField a = gen.field(2), b = gen.field(2);
    Expr lhs = exterior_derivative(eta).on({a, b});
    Expr rhs = 0.5 * (a.apply(eta.on({b})) - b.apply(eta.on({a})) - eta.on({lie_bracket(a, b)}));
    auto p = gen.point();
    CHECK(testing::scaled_gap(eval(lhs, p), eval(rhs, p)) < 1e-11);
  }
}

TEST_CASE("forms stay antisymmetric") {
  KForm f(3, 4);
  f.set(0, 2, 3, x);
  std::vector<double> p = {0, 2, 0, 0};
  CHECK(eval(f(2, 3, 0), p).real() == doctest::Approx(2));
  CHECK(eval(f(3, 2, 0), p).real() == doctest::Approx(-2));
  CHECK(f(2, 2, 0).is_zero());
  CHECK(f.independent_components().size() == 4);
}

TEST_CASE("tensor algebra") {
  Tensor11 j(3);
  j(2, 1) = 1.0;
  j(1, 2) = -1.0;
  Tensor11 jj = j * j;
  std::vector<double> p = {0, 0, 0};
  Eigen::MatrixXcd m = eval_matrix(jj, p);
  CHECK(m(1, 1).real() == doctest::Approx(-1));
  CHECK(m(2, 2).real() == doctest::Approx(-1));
  CHECK(m(0, 0).real() == doctest::Approx(0));
  Tensor11 o = Tensor11::outer(VectorField::coordinate(3, 0), one_form({1.0, 0.0, 0.0}));
  CHECK(gap(jj + o, -1.0 * Tensor11::identity(3) + 2.0 * o, p) < 1e-15);
  CHECK(gap(j.apply(VectorField::coordinate(3, 1)), VectorField::coordinate(3, 2), p) < 1e-15);
}

TEST_CASE("metric lowering") {
  MetricField g(3);
  g.set(0, 0, 1.0);
  g.set(1, 1, exp(t));
  g.set(2, 2, 2.0);
  g.set(1, 2, x);
  std::vector<double> p = {0.5, 0.3, 0.0};
  CHECK(eval(g(2, 1), p).real() == doctest::Approx(0.3));
  KForm l = g.lower(VectorField::coordinate(3, 1));
  CHECK(eval(l(1), p).real() == doctest::Approx(std::exp(0.5)));
  CHECK(eval(l(2), p).real() == doctest::Approx(0.3));
}

TEST_CASE("complexified frame") {
  auto f = complexify_frame(ChartDecl::standard(1));
  REQUIRE(f.size() == 3);
  std::vector<double> p = {0, 0, 0};
  Eigen::VectorXcd z = eval_vector(f[1], p);
  CHECK(z(1) == Complex(0.5, 0));
  CHECK(z(2) == Complex(0, -0.5));
  CHECK(max_abs(eval_vector(f[2], p) - z.conjugate()) < 1e-15);
}

TEST_CASE("Lie derivative of a tensor on a known example") {
  // X = d/dt, T = e^t d/dx (x) dy: L_X T = T
  Tensor11 tt(3);
  tt(1, 2) = exp(t);
  Tensor11 l = lie_derivative(VectorField::coordinate(3, 0), tt);
  std::vector<double> p = {0.2, 0.1, 0.3};
  CHECK(gap(l, tt, p) < 1e-14);
}

} // TEST_SUITE
