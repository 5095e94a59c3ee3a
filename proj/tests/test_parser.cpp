#include <doctest.h>

#include <cmath>

#include "accr/parser.hpp"
#include "support.hpp"

using namespace accr;

namespace {
ChartDecl chart1() { return ChartDecl(1, {"t", "x", "y"}, {{-1, 1}, {-1, 1}, {-1, 1}}); }
} // namespace

TEST_SUITE("parser") {

TEST_CASE("parses against a manually built tree") {
  ChartDecl c = chart1();
  Expr parsed = parse_expression("2*x + sin(t)^2 - exp(-y)/3", c);
  Expr manual = 2.0 * Expr::var(1) + pow(sin(Expr::var(0)), 2) - exp(-Expr::var(2)) / 3.0;
  testing::ExprGen gen(3, 3);
  for (int k = 0; k < 20; ++k) {
    auto p = gen.point();
    CHECK(std::abs(eval(parsed, p) - eval(manual, p)) < 1e-14);
  }
}

TEST_CASE("precedence and unary minus") {
  ChartDecl c = chart1();
  std::vector<double> p = {0.5, 2.0, 3.0};
  CHECK(eval(parse_expression("-x^2", c), p).real() == doctest::Approx(-4.0));
  CHECK(eval(parse_expression("x - y - 1", c), p).real() == doctest::Approx(-2.0));
  CHECK(eval(parse_expression("x / y / 2", c), p).real() == doctest::Approx(1.0 / 3.0));
  CHECK(eval(parse_expression("x^(-2)", c), p).real() == doctest::Approx(0.25));
  CHECK(eval(parse_expression("1e-1 * 2.5E1", c), p).real() == doctest::Approx(2.5));
}

TEST_CASE("complex aliases for n = 1") {
  ChartDecl c = chart1();
  std::vector<double> p = {0.0, 0.3, -0.4};
  Complex z = eval(parse_expression("z", c), p);
  Complex zb = eval(parse_expression("zb", c), p);
  CHECK(z == Complex(0.3, -0.4));
  CHECK(zb == Complex(0.3, 0.4));
  Complex zz = eval(parse_expression("z*conj(z) + i*z1", c), p);
  CHECK(std::abs(zz - (Complex(0.25, 0) + Complex(0, 1) * Complex(0.3, -0.4))) < 1e-15);
}

TEST_CASE("named parameters resolve after coordinates") {
  ChartDecl c = chart1();
  Expr e = parse_expression("k*x + m", c, {"k", "m"});
  CHECK(eval(e, std::vector<double>{0, 2, 0}, {{"k", 3}, {"m", 1}}).real() == doctest::Approx(7));
}

TEST_CASE("errors carry line and column") {
  ChartDecl c = chart1();
  auto located = [&](const std::string& src, int line, int col) {
    try {
      parse_expression(src, c);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == col);
      return;
    }
    FAIL("no error for " << src);
  };
  located("1 + * x", 1, 5);
  located("sin(x", 1, 6);
  located("x +\n  q", 2, 3);
  located("x ^ y", 1, 5);
  located("", 1, 1);
  located("x y", 1, 3);
}

TEST_CASE("printing round trips through the parser") {
  ChartDecl c = chart1();
  testing::ExprGen gen(19, 3);
  for (int k = 0; k < 40; ++k) {
    Expr e = gen.complex_tree(3);
    Expr back = parse_expression(to_string(e, c.names()), c);
    auto p = gen.point();
    Complex a = eval(e, p), b = eval(back, p);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

} // TEST_SUITE
