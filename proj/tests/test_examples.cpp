// Small worked examples with known answers, grouped under the module suites.
#include <doctest.h>

#include <cmath>

#include "accr/cr.hpp"
#include "accr/models.hpp"
#include "accr/pack.hpp"
#include "accr/parser.hpp"
#include "accr/riemann.hpp"
#include "support.hpp"

using namespace accr;
using testing::ExprGen;

namespace {

const Expr t = Expr::var(0);
const Expr x = Expr::var(1);
const Expr y = Expr::var(2);
const Expr I = Expr::imag_unit();

double gap(const VectorField& a, const VectorField& b, std::span<const double> p) {
  return max_abs(eval_vector(a, p) - eval_vector(b, p));
}
double gap(const Tensor11& a, const Tensor11& b, std::span<const double> p) {
  return max_abs(eval_matrix(a, p) - eval_matrix(b, p));
}
double size(const Tensor11& a, std::span<const double> p) { return max_abs(eval_matrix(a, p)); }

Model model(Realization r, int n, double mu = 0.0) { return build_model({r, n, mu}); }

} // namespace

TEST_SUITE("expr") {

TEST_CASE("frame coefficient parses with a free parameter") {
  ChartDecl chart = ChartDecl::standard(1);
  Expr e = parse_expression("cosh(w*t) + sinh(w*t)/w", chart, {"w"});
  CHECK(e.depth() == 4);
  CHECK_THROWS_AS(parse_expression("cosh(w*t)", chart), ParseError);
  std::vector<double> p = {0.3, 0.0, 0.0};
  double w = 0.5;
  Complex v = eval(e, p, {{"w", w}});
  CHECK(std::abs(v - (std::cosh(w * 0.3) + std::sinh(w * 0.3) / w)) < 1e-15);
}

TEST_CASE("d/dt sinh(w t) = w cosh(w t) and agrees with a difference quotient") {
  ChartDecl chart = ChartDecl::standard(1);
  Expr s = parse_expression("sinh(w*t)", chart, {"w"});
  Expr ds = differentiate(s, 0);
  Expr expect = parse_expression("w*cosh(w*t)", chart, {"w"});
  ParamMap w = {{"w", 0.5}};
  std::vector<double> p = {0.3, 0.0, 0.0};
  CHECK(std::abs(eval(ds, p, w) - eval(expect, p, w)) < 1e-15);
  Expr bound = bind_params(s, w);
  const double h = 1e-5;
  auto at = [&](double dt) { return eval(bound, std::vector<double>{0.3 + dt, 0, 0}); };
  Complex fd = (at(h) - at(-h)) / (2 * h);
  CHECK(std::abs(eval(ds, p, w) - fd) < 1e-8);
}

TEST_CASE("conj is an involution and commutes with evaluation") {
  ExprGen gen(101, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Expr e = gen.complex_tree(3);
    auto p = gen.point();
    CHECK(std::abs(eval(conj(conj(e)), p) - eval(e, p)) < 1e-13 * std::max(1.0, std::abs(eval(e, p))));
    CHECK(std::abs(eval(conj(e), p) - std::conj(eval(e, p))) < 1e-13 * std::max(1.0, std::abs(eval(e, p))));
  }
}

TEST_CASE("differentiation is linear") {
  ExprGen gen(102, 3);
  Expr f = gen.tree(3), g = gen.tree(3);
  const double a = 1.75, b = -0.5;
  for (int k = 0; k < 100; ++k) {
    auto p = gen.point();
    for (int c = 0; c < 3; ++c) {
      Complex lhs = eval(differentiate(a * f + b * g, c), p);
      Complex rhs = a * eval(differentiate(f, c), p) + b * eval(differentiate(g, c), p);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("conj(z) parses to the hand-built tree") {
  ChartDecl chart = ChartDecl::standard(1);
  Expr parsed = parse_expression("conj(z)", chart);
  Expr manual = conj(x + I * y);
  ExprGen gen(103, 3);
  for (int k = 0; k < 10; ++k) {
    auto p = gen.point();
    CHECK(std::abs(eval(parsed, p) - eval(manual, p)) < 1e-15);
    CHECK(std::abs(eval(parsed, p) - Complex(p[1], -p[2])) < 1e-15);
  }
}

TEST_CASE("r-formula at z = 1, mu = 0") {
  ChartDecl chart = ChartDecl::standard(1);
  Expr u = parse_expression("z + i*m/2*zb", chart, {"m"});
  Expr r = 1.0 + 2.0 * u * conj(u);
  CHECK(std::abs(eval(r, std::vector<double>{0, 1, 0}, {{"m", 0.0}}) - 3.0) < 1e-15);
}

} // TEST_SUITE

TEST_SUITE("fields") {

TEST_CASE("[d/dt, e^t d/dx] = e^t d/dx") {
  VectorField a = VectorField::coordinate(3, 0);
  VectorField b({0.0, exp(t), 0.0});
  CHECK(gap(lie_bracket(a, b), b, std::vector<double>{0.4, -0.1, 0.2}) < 1e-15);
}

TEST_CASE("[X, X] = 0 for random fields") {
  ExprGen gen(111, 3);
  for (int trial = 0; trial < 10; ++trial) {
    VectorField v = gen.field(3);
    auto p = gen.point();
    CHECK(max_abs(eval_vector(lie_bracket(v, v), p)) < 1e-12);
  }
}

TEST_CASE("global realization: [xi, d/dx] = d/dx - (mu/2) d/dy") {
  for (double mu : {0.0, 1.0, -3.0}) {
    Model m = model(Realization::ModelGlobalCr, 1, mu);
    VectorField dx = VectorField::coordinate(3, 1);
    VectorField expect({0.0, 1.0, -mu / 2});
    CHECK(gap(lie_bracket(m.structure.xi, dx), expect, std::vector<double>{0.2, 0.5, -0.7}) < 1e-14);
  }
}

TEST_CASE("d(dt) = 0 and d(t dx) = dt ^ dx") {
  std::vector<double> p = {0.3, 0.1, 0.2};
  KForm ddt = exterior_derivative(differential(t, 3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(ddt(i, j).is_zero());
  KForm d = exterior_derivative(one_form({0.0, t, 0.0}));
  CHECK(eval(d(0, 1), p).real() == doctest::Approx(0.5));
  KForm w = wedge(differential(t, 3), differential(x, 3));
  CHECK(std::abs(eval(d(0, 1) - w(0, 1), p)) < 1e-15);
}

TEST_CASE("flat model: d Phi = 0, L_xi Id = 0, L_xi phi = 0") {
  for (int n : {1, 2}) {
    Model m = model(Realization::Flat, n);
    const ChartStructure& s = m.structure;
    KForm dphi = exterior_derivative(fundamental_form(s));
    for (const Expr& c : dphi.independent_components())
      CHECK(std::abs(eval(c, std::vector<double>(s.dim(), 0.3))) < 1e-15);
    std::vector<double> p(s.dim(), -0.2);
    CHECK(size(lie_derivative(s.xi, Tensor11::identity(s.dim())), p) < 1e-15);
    CHECK(size(lie_derivative(s.xi, s.phi), p) < 1e-15);
  }
}

TEST_CASE("phi Z = i Z on sections of a CR-built structure") {
  ModelSpec spec{Realization::ModelGlobalCr, 2, 1.5};
  ChartStructure s = build_from_cr_chart(model_cr_data(spec));
  ExprGen gen(112, s.dim());
  for (const CRSection& sec : dprime_spanning_sections(s))
    for (int k = 0; k < 3; ++k) {
      auto p = gen.point();
      CHECK(gap(s.phi.apply(sec.z), I * sec.z, p) < 1e-12);
    }
}

} // TEST_SUITE

TEST_SUITE("riemann") {

TEST_CASE("inverse of a diagonal metric") {
  MetricField g(3);
  g.set(0, 0, 1.0);
  g.set(1, 1, exp(-2.0 * t));
  g.set(2, 2, exp(2.0 * t));
  std::vector<Expr> inv = inverse_metric(g);
  std::vector<double> p = {0.35, 0.0, 0.0};
  CHECK(eval(inv[0], p).real() == doctest::Approx(1.0));
  CHECK(eval(inv[4], p).real() == doctest::Approx(std::exp(0.7)).epsilon(1e-14));
  CHECK(eval(inv[8], p).real() == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
  CHECK(std::abs(eval(inv[1], p)) < 1e-15);
}

TEST_CASE("inverse of a constant 5x5 positive definite metric") {
  ExprGen gen(121, 5);
  Eigen::MatrixXd b(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      b(i, j) = gen.uniform(-1.0, 1.0);
  Eigen::MatrixXd a = b * b.transpose() + Eigen::MatrixXd::Identity(5, 5);
  MetricField g(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j)
      g.set(i, j, a(i, j));
  std::vector<Expr> inv = inverse_metric(g);
  Eigen::MatrixXd expect = a.inverse();
  std::vector<double> p(5, 0.0);
  double worst = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      worst = std::max(worst, std::abs(eval(inv[i * 5 + j], p) - expect(i, j)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("flat Christoffel symbols vanish") {
  Model m = model(Realization::Flat, 2);
  ConnectionData conn = christoffel(m.structure.g);
  for (const Expr& c : conn.symbols())
    CHECK(std::abs(eval(c, std::vector<double>(5, 0.4))) < 1e-15);
}

TEST_CASE("mu = 0 model: Gamma^y_ty = 1 and Gamma is symmetric") {
  Model m = model(Realization::ModelFrame, 1, 0.0);
  ConnectionData conn = christoffel(m.structure.g);
  std::vector<double> p = {-0.3, 0.2, 0.6};
  CHECK(std::abs(eval(conn(2, 0, 2), p) - 1.0) < 1e-12);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(eval(conn(k, i, j) - conn(k, j, i), p)) < 1e-14);
}

TEST_CASE("nabla_X (f Y) = (X f) Y + f nabla_X Y") {
  Model m = model(Realization::ModelFrame, 1, 1.5);
  ConnectionData conn = christoffel(m.structure.g);
  ExprGen gen(122, 3);
  for (int trial = 0; trial < 5; ++trial) {
    VectorField a = gen.field(2), b = gen.field(2);
    Expr f = gen.tree(3);
    VectorField lhs = covariant_derivative(conn, a, f * b);
    VectorField rhs = a.apply(f) * b + f * covariant_derivative(conn, a, b);
    auto p = gen.point();
    CHECK(gap(lhs, rhs, p) <= 1e-9 * std::max(1.0, max_abs(eval_vector(rhs, p))));
  }
}

TEST_CASE("nabla Id = 0, flat nabla phi = 0, mu = 0 nabla_xi A = 0") {
  std::vector<double> p = {0.25, -0.4, 0.1};
  Model curved = model(Realization::ModelFrame, 1, 1.0);
  ConnectionData conn = christoffel(curved.structure.g);
  for (int k = 0; k < 3; ++k)
    CHECK(size(covariant_derivative(conn, VectorField::coordinate(3, k), Tensor11::identity(3)), p) < 1e-14);

  Model flat = model(Realization::Flat, 1);
  ConnectionData fc = christoffel(flat.structure.g);
  for (int k = 0; k < 3; ++k)
    CHECK(size(covariant_derivative(fc, VectorField::coordinate(3, k), flat.structure.phi), p) < 1e-15);

  Model m0 = model(Realization::ModelFrame, 1, 0.0);
  Analysis an(m0.structure);
  CHECK(size(covariant_derivative(an.connection(), m0.structure.xi, an.tensor_A()), p) < 1e-10);
}

} // TEST_SUITE

TEST_SUITE("accs") {

TEST_CASE("fundamental form of the flat model") {
  Model m = model(Realization::Flat, 1);
  KForm phi = fundamental_form(m.structure);
  std::vector<double> p = {0.1, 0.2, 0.3};
  CHECK(eval(phi(1, 2), p).real() == doctest::Approx(1.0));
  CHECK(eval(phi(2, 1), p).real() == doctest::Approx(-1.0));
  for (int b = 0; b < 3; ++b)
    CHECK(std::abs(eval(phi.on({m.structure.xi, VectorField::coordinate(3, b)}), p)) < 1e-15);
}

TEST_CASE("metric doubled breaks eta = g(., xi)") {
  Model m = model(Realization::ModelFrame, 1, 1.0);
  ChartStructure s = m.structure;
  MetricField g2(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      g2.set(i, j, 2.0 * s.g(i, j));
  s.g = g2;
  Sample sample = Sample::draw(s.chart, 4, 20);
  VerificationReport r = check_acm_axioms(s, sample, 1e-8);
  CHECK(!r.pass);
}

TEST_CASE("perturbing the metric by t dx^2 makes d Phi nonzero") {
  Model m = model(Realization::Flat, 1);
  ChartStructure s = m.structure;
  s.g.set(1, 1, s.g(1, 1) + t);
  Analysis an(s);
  Sample sample = Sample::draw(s.chart, 4, 20);
  VerificationReport r = check_almost_cosymplectic(an, sample, 1e-8);
  CHECK(!r.pass);
  CHECK(r.max_residual > 0.1);
}

TEST_CASE("Nijenhuis tensor: zero when flat, nonzero at mu = 0, N(X, X) = 0") {
  std::vector<double> p = {0.3, -0.2, 0.5};
  Model flat = model(Realization::Flat, 1);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(max_abs(eval_vector(nijenhuis(flat.structure, a, b), p)) < 1e-15);
  Model m0 = model(Realization::ModelFrame, 1, 0.0);
  double largest = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      largest = std::max(largest, max_abs(eval_vector(nijenhuis(m0.structure, a, b), p)));
  CHECK(largest > 0.1);
  ExprGen gen(131, 3);
  VectorField v = gen.field(2);
  CHECK(max_abs(eval_vector(nijenhuis(m0.structure, v, v), p)) < 1e-12);
}

TEST_CASE("A^2 = I - eta (x) xi on kappa = -1 models") {
  for (double mu : {0.0, 1.0, 2.0, -3.0}) {
    Model m = model(Realization::ModelFrame, 1, mu);
    Analysis an(m.structure);
    const Tensor11& a = an.tensor_A();
    Tensor11 expect = Tensor11::identity(3) - an.eta_xi();
    CHECK(gap(a * a, expect, std::vector<double>{0.2, 0.4, -0.5}) < 1e-9);
  }
}

TEST_CASE("mu = 2: nabla_xi A = 2 h") {
  Model m = model(Realization::ModelFrame, 1, 2.0);
  Analysis an(m.structure);
  Tensor11 lhs = covariant_derivative(an.connection(), m.structure.xi, an.tensor_A());
  Tensor11 h = 0.5 * lie_derivative(m.structure.xi, m.structure.phi);
  CHECK(gap(lhs, 2.0 * h, std::vector<double>{-0.1, 0.6, 0.3}) <= 1e-8);
}

TEST_CASE("sign of the Perrone invariant across mu") {
  std::vector<double> p = {0.1, 0.2, 0.3};
  auto sign = [&](double mu) {
    Model m = model(Realization::ModelFrame, 1, mu);
    Analysis an(m.structure);
    double v = perrone_p(an, p).p;
    return std::abs(v) < 1e-8 ? 0 : (v > 0 ? 1 : -1);
  };
  CHECK(sign(0.0) == -1);
  CHECK(sign(1.0) == -1);
  CHECK(sign(2.0) == 0);
  CHECK(sign(3.0) == 1);
  Model flat = model(Realization::Flat, 1);
  Analysis fa(flat.structure);
  CHECK(std::abs(perrone_p(fa, p).p) < 1e-15);
}

} // TEST_SUITE

TEST_SUITE("cr") {

TEST_CASE("flat model: X = d/dx gives Z = d/dx - i d/dy") {
  Model m = model(Realization::Flat, 1);
  Sample s = Sample::draw(m.structure.chart, 1, 5);
  CRSection sec = dprime_section(m.structure, VectorField::coordinate(3, 1), s, 1e-12);
  VectorField expect({0.0, 1.0, -1.0 * I});
  CHECK(gap(sec.z, expect, std::vector<double>{0.3, 0.1, -0.2}) < 1e-15);
}

TEST_CASE("flat model: nabla' is the coordinate derivative") {
  Model m = model(Realization::Flat, 1);
  Analysis an(m.structure);
  HermitianConnection conn(an);
  ExprGen gen(141, 3);
  Expr f = gen.tree(3) + I * gen.tree(3);
  VectorField z = f * VectorField({0.0, 1.0, -1.0 * I});
  for (int k = 0; k < 3; ++k) {
    VectorField dk = VectorField::coordinate(3, k);
    VectorField expect = differentiate(f, k) * VectorField({0.0, 1.0, -1.0 * I});
    auto p = gen.point();
    CHECK(gap(conn(dk, z), expect, p) < 1e-12 * std::max(1.0, max_abs(eval_vector(expect, p))));
  }
}

TEST_CASE("nabla'_X (f Z) = (X f) Z + f nabla'_X Z") {
  Model m = model(Realization::ModelFrame, 1, 1.0);
  Analysis an(m.structure);
  HermitianConnection conn(an);
  ExprGen gen(142, 3);
  for (const CRSection& sec : dprime_spanning_sections(m.structure)) {
    Expr f = gen.tree(2) + I * gen.tree(2);
    VectorField a = gen.field(2);
    VectorField lhs = conn(a, f * sec.z);
    VectorField rhs = a.apply(f) * sec.z + f * conn(a, sec.z);
    auto p = gen.point();
    CHECK(gap(lhs, rhs, p) < 1e-9 * std::max(1.0, max_abs(eval_vector(rhs, p))));
  }
}

TEST_CASE("H(Z, Z) is real and nonnegative") {
  Model m = model(Realization::ModelGlobalCr, 2, -1.5);
  Analysis an(m.structure);
  HermitianConnection conn(an);
  ExprGen gen(143, 5);
  for (const CRSection& sec : dprime_spanning_sections(m.structure)) {
    Expr f = gen.tree(2) + I * gen.tree(2);
    auto p = gen.point();
    Complex h = eval(conn.hermitian(f * sec.z, f * sec.z), p);
    CHECK(std::abs(h.imag()) < 1e-12 * std::max(1.0, std::abs(h)));
    CHECK(h.real() >= 0.0);
  }
}

TEST_CASE("a = 0, g = 1/2 delta rebuilds the flat structure") {
  for (int n : {1, 2}) {
    CRChartData data{ChartDecl::standard(n), std::vector<Expr>(n, Expr(0.0)), {}};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        data.hermitian.push_back(i == j ? Expr(0.5) : Expr(0.0));
    ChartStructure s = build_from_cr_chart(data);
    Model flat = model(Realization::Flat, n);
    Sample sample = Sample::draw(s.chart, 2, 10);
    CHECK(compare_structures(s, flat.structure, sample, 1e-14).pass);
    for (std::size_t k = 0; k < sample.points.size(); ++k) {
      auto p = sample.points[k];
      CHECK(std::abs(eval(data.r(), p) - 1.0) < 1e-15);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(eval(data.b(i), p)) < 1e-15);
    }
  }
}

} // TEST_SUITE

TEST_SUITE("models") {

TEST_CASE("mu = 0 frame and metric in closed form") {
  Model m = model(Realization::ModelFrame, 1, 0.0);
  std::vector<double> p = {0.45, -0.3, 0.2};
  double e = std::exp(0.45);
  CHECK(gap(m.frame.x[0], VectorField({0.0, exp(t), 0.0}), p) < 1e-14);
  CHECK(gap(m.frame.y[0], VectorField({0.0, 0.0, exp(-1.0 * t)}), p) < 1e-14);
  Eigen::MatrixXcd g = eval_matrix(m.structure.g, p);
  Eigen::MatrixXd expect = Eigen::Vector3d(1.0, 1 / (e * e), e * e).asDiagonal();
  CHECK(max_abs(g - expect.cast<Complex>()) < 1e-13);
}

TEST_CASE("mu = 2 frame is polynomial in t") {
  Model m = model(Realization::ModelFrame, 1, 2.0);
  CHECK(frame_case(2.0) == FrameCase::Parabolic);
  std::vector<double> p = {0.45, -0.3, 0.2};
  CHECK(gap(m.frame.x[0], VectorField({0.0, 1.0 + t, -1.0 * t}), p) < 1e-14);
  CHECK(gap(m.frame.y[0], VectorField({0.0, t, 1.0 - t}), p) < 1e-14);
}

TEST_CASE("a-bar is the conjugate of a in the global chart data") {
  ModelSpec spec{Realization::ModelGlobalCr, 2, 1.0};
  CRChartData data = model_cr_data(spec);
  ChartStructure s = build_from_cr_chart(data);
  Sample sample = Sample::draw(s.chart, 9, 100);
  // xi = d_t + sum (a^i d_{z^i} + conj(a^i) d_{zbar^i}) is real exactly when the
  // d_{zbar} coefficients are the conjugates of the d_z ones.
  for (std::size_t k = 0; k < sample.points.size(); ++k) {
    auto p = sample.points[k];
    Eigen::VectorXcd xi = eval_vector(s.xi, p);
    CHECK(xi.imag().norm() < 1e-14);
    for (int i = 0; i < 2; ++i) {
      Complex a = eval(data.a[i], p);
      CHECK(std::abs(xi(1 + i) - a.real()) < 1e-14);
      CHECK(std::abs(xi(3 + i) - a.imag()) < 1e-14);
    }
  }
}

} // TEST_SUITE
