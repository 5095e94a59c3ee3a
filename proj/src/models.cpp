#include "accr/models.hpp"

#include <cmath>

#include "accr/pack.hpp"

namespace accr {
namespace {

VectorField coord(int dim, int k) { return VectorField::coordinate(dim, k); }

KForm coform(int dim, int k) {
  KForm f(1, dim);
  f.set(k, 1.0);
  return f;
}

KForm combine(int dim, std::initializer_list<std::pair<int, Expr>> terms) {
  KForm f(1, dim);
  for (const auto& [k, v] : terms)
    f.set(k, f(k) + v);
  return f;
}

VectorField field(int dim, std::initializer_list<std::pair<int, Expr>> terms) {
  std::vector<Expr> c(dim);
  for (const auto& [k, v] : terms)
    c[k] += v;
  return VectorField(std::move(c));
}

Frame flat_frame(const ChartDecl& chart) {
  const int dim = chart.dim();
  Frame f{coord(dim, 0), {}, {}, coform(dim, 0), {}, {}};
  for (int i = 0; i < chart.n(); ++i) {
    f.x.push_back(coord(dim, chart.x_index(i)));
    f.y.push_back(coord(dim, chart.y_index(i)));
    f.theta_x.push_back(coform(dim, chart.x_index(i)));
    f.theta_y.push_back(coform(dim, chart.y_index(i)));
  }
  return f;
}

Frame global_cr_frame(const ChartDecl& chart, double mu) {
  const int dim = chart.dim();
  Frame f = flat_frame(chart);
  std::vector<Expr> xi(dim);
  xi[0] = 1.0;
  for (int i = 0; i < chart.n(); ++i) {
    int xk = chart.x_index(i), yk = chart.y_index(i);
    Expr x = Expr::var(xk), y = Expr::var(yk);
    xi[xk] = -x - (mu / 2) * y;
    xi[yk] = (mu / 2) * x + y;
    f.theta_x[i] = combine(dim, {{xk, 1.0}, {0, -xi[xk]}});
    f.theta_y[i] = combine(dim, {{yk, 1.0}, {0, -xi[yk]}});
  }
  f.xi = VectorField(std::move(xi));
  return f;
}

Frame twisted_frame(const ChartDecl& chart) {
  if (chart.n() < 2)
    throw DomainError("control-twisted needs n >= 2");
  const int dim = chart.dim();
  Frame f = flat_frame(chart);
  Expr s = Expr::var(chart.x_index(0));
  int x0 = chart.x_index(0), x1 = chart.x_index(1), y0 = chart.y_index(0), y1 = chart.y_index(1);
  // shear mixing the two complex directions; the leaf symplectic form stays constant
  f.y[0] = field(dim, {{y0, 1.0}, {x1, s}});
  f.y[1] = field(dim, {{y1, 1.0}, {x0, s}});
  f.theta_x[0] = combine(dim, {{x0, 1.0}, {y1, -s}});
  f.theta_x[1] = combine(dim, {{x1, 1.0}, {y0, -s}});
  return f;
}

Frame contact_frame(const ChartDecl& chart) {
  const int dim = chart.dim();
  Frame f = flat_frame(chart);
  KForm eta = coform(dim, 0);
  for (int i = 0; i < chart.n(); ++i) {
    Expr y = Expr::var(chart.y_index(i));
    eta.set(chart.x_index(i), -y);
    f.x[i] = field(dim, {{chart.x_index(i), 1.0}, {0, y}});
  }
  f.eta = eta;
  return f;
}

Frame product_kahler_frame(const ChartDecl& chart) {
  const int dim = chart.dim();
  Frame f = flat_frame(chart);
  for (int i = 0; i < chart.n(); ++i) {
    int xk = chart.x_index(i), yk = chart.y_index(i);
    Expr x = Expr::var(xk), y = Expr::var(yk);
    Expr u = 0.3 * x * y + 0.2 * x * x;
    Expr up = exp(u), down = exp(-u);
    f.x[i] = field(dim, {{xk, down}});
    f.y[i] = field(dim, {{yk, down}});
    f.theta_x[i] = combine(dim, {{xk, up}});
    f.theta_y[i] = combine(dim, {{yk, up}});
  }
  return f;
}

} // namespace

const std::vector<ModelInfo>& model_registry() {
  static const std::vector<ModelInfo> reg = {
      {"flat", Realization::Flat, "flat cosymplectic structure on R x C^n", 1, false},
      {"model-frame", Realization::ModelFrame,
       "(-1, mu, 0)-space from the left-invariant frame (cases |mu| < 2, = 2, > 2)", 1, true},
      {"model-global-cr", Realization::ModelGlobalCr,
       "(-1, mu, 0)-space in global CR coordinates", 1, true},
      {"control-twisted", Realization::ControlTwisted,
       "almost cosymplectic, leaves not Kahler (negative control)", 2, false},
      {"control-contact", Realization::ControlContact,
       "contact-type eta = dt - sum y dx, not Levi flat (negative control)", 1, false},
      {"product-kahler", Realization::ProductKahler,
       "line times a product of curved Kahler surfaces (cosymplectic, not flat)", 1, false},
  };
  return reg;
}

Realization realization_from_name(const std::string& name) {
  for (const auto& m : model_registry())
    if (m.name == name)
      return m.realization;
  throw DomainError("unknown model '" + name + "'");
}

std::string realization_name(Realization r) {
  for (const auto& m : model_registry())
    if (m.realization == r)
      return m.name;
  return "unknown";
}

FrameCase frame_case(double mu) {
  double a = std::abs(mu);
  if (a == 2.0)
    return FrameCase::Parabolic;
  return a < 2.0 ? FrameCase::Hyperbolic : FrameCase::Elliptic;
}

Frame model_frame(int n, double mu, const ChartDecl& chart) {
  if (chart.n() != n)
    throw DomainError("model frame: chart does not match n");
  const int dim = chart.dim();
  Expr t = Expr::var(0);
  // X = a d_x + b d_y, Y = c d_x + d d_y with a d - b c = 1 in every case
  Expr a, b, c, d;
  switch (frame_case(mu)) {
  case FrameCase::Hyperbolic:
  case FrameCase::Elliptic: {
    bool hyp = frame_case(mu) == FrameCase::Hyperbolic;
    double w = hyp ? std::sqrt(1.0 - mu * mu / 4.0) : std::sqrt(mu * mu / 4.0 - 1.0);
    Expr ch = hyp ? cosh(w * t) : cos(w * t);
    Expr sh = hyp ? sinh(w * t) : sin(w * t);
    a = ch + sh / w;
    b = -(mu / (2 * w)) * sh;
    c = (mu / (2 * w)) * sh;
    d = ch - sh / w;
    break;
  }
  case FrameCase::Parabolic: {
    double eps = mu / 2;
    a = 1.0 + t;
    b = -eps * t;
    c = eps * t;
    d = 1.0 - t;
    break;
  }
  }
  Frame f = flat_frame(chart);
  for (int i = 0; i < n; ++i) {
    int xk = chart.x_index(i), yk = chart.y_index(i);
    f.x[i] = field(dim, {{xk, a}, {yk, b}});
    f.y[i] = field(dim, {{xk, c}, {yk, d}});
    f.theta_x[i] = combine(dim, {{xk, d}, {yk, -c}});
    f.theta_y[i] = combine(dim, {{xk, -b}, {yk, a}});
  }
  return f;
}

ChartStructure structure_from_frame(const ChartDecl& chart, const Frame& f) {
  const int dim = chart.dim();
  Tensor11 phi(dim);
  for (std::size_t i = 0; i < f.x.size(); ++i)
    phi = phi + Tensor11::outer(f.y[i], f.theta_x[i]) - Tensor11::outer(f.x[i], f.theta_y[i]);
  MetricField g(dim);
  std::vector<Expr> inv(static_cast<std::size_t>(dim) * dim);
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      Expr s = f.eta(a) * f.eta(b);
      Expr si = f.xi[a] * f.xi[b];
      for (std::size_t i = 0; i < f.x.size(); ++i) {
        s += f.theta_x[i](a) * f.theta_x[i](b) + f.theta_y[i](a) * f.theta_y[i](b);
        si += f.x[i][a] * f.x[i][b] + f.y[i][a] * f.y[i][b];
      }
      g.set(a, b, s);
      inv[a * dim + b] = si;
      inv[b * dim + a] = si;
    }
  g.set_known_inverse(std::move(inv));
  return ChartStructure{chart, std::move(phi), f.xi, f.eta, std::move(g)};
}

Model build_model(const ModelSpec& spec) {
  if (spec.n < 1)
    throw DomainError("model: n must be at least 1");
  if (!std::isfinite(spec.mu))
    throw DomainError("model: mu must be finite");
  ChartDecl chart = ChartDecl::standard(spec.n, spec.half_width);
  Frame f = [&] {
    switch (spec.realization) {
    case Realization::Flat:
      return flat_frame(chart);
    case Realization::ModelFrame:
      return model_frame(spec.n, spec.mu, chart);
    case Realization::ModelGlobalCr:
      return global_cr_frame(chart, spec.mu);
    case Realization::ControlTwisted:
      return twisted_frame(chart);
    case Realization::ControlContact:
      return contact_frame(chart);
    case Realization::ProductKahler:
      return product_kahler_frame(chart);
    }
    throw DomainError("model: unknown realization");
  }();
  ChartStructure s = structure_from_frame(chart, f);
  return Model{spec, std::move(s), std::move(f)};
}

VerificationReport check_commutators(const Model& model, const Sample& sample, double tol) {
  if (model.spec.realization != Realization::ModelFrame &&
      model.spec.realization != Realization::ModelGlobalCr)
    throw DomainError("commutator table is defined for the mu models only");
  const Frame& f = model.frame;
  const double half = model.spec.mu / 2;
  const std::size_t n = f.x.size();
  std::vector<Expr> xi_x, xi_y, xx, xy, yy;
  auto push = [](std::vector<Expr>& out, const VectorField& v) {
    out.insert(out.end(), v.components().begin(), v.components().end());
  };
  for (std::size_t i = 0; i < n; ++i) {
    push(xi_x, lie_bracket(f.xi, f.x[i]) - f.x[i] + half * f.y[i]);
    push(xi_y, lie_bracket(f.xi, f.y[i]) - half * f.x[i] + f.y[i]);
    for (std::size_t j = 0; j < n; ++j) {
      push(xy, lie_bracket(f.x[i], f.y[j]));
      if (j > i) {
        push(xx, lie_bracket(f.x[i], f.x[j]));
        push(yy, lie_bracket(f.y[i], f.y[j]));
      }
    }
  }
  ResidualSet rs;
  rs.add("[xi, X_i] - X_i + mu/2 Y_i", xi_x);
  rs.add("[xi, Y_i] - mu/2 X_i + Y_i", xi_y);
  rs.add("[X_i, X_j]", xx);
  rs.add("[X_i, Y_j]", xy);
  rs.add("[Y_i, Y_j]", yy);
  return rs.evaluate("commutators", sample, tol);
}

LimitReport check_limit_at_two(int n, double delta, double sign, const Sample& sample) {
  ChartDecl chart = ChartDecl::standard(n);
  double s = sign < 0 ? -1.0 : 1.0;
  Frame mid = model_frame(n, 2.0 * s, chart);
  Frame below = model_frame(n, s * (2.0 - delta), chart);
  Frame above = model_frame(n, s * (2.0 + delta), chart);
  auto deviation = [&](const Frame& other) {
    ResidualSet rs;
    for (int i = 0; i < n; ++i) {
      rs.add("X", other.x[i] - mid.x[i]);
      rs.add("Y", other.y[i] - mid.y[i]);
    }
    return rs.evaluate("limit", sample, 0.0).max_residual;
  };
  return LimitReport{delta, deviation(below), deviation(above)};
}

CRChartData model_cr_data(const ModelSpec& spec) {
  if (spec.realization != Realization::ModelGlobalCr)
    throw DomainError("CR chart data is available for model-global-cr only");
  Model m = build_model(spec);
  CRChartData out = extract_cr_chart(m.structure);
  const ChartDecl& chart = m.structure.chart;
  const Expr i = Expr::imag_unit();
  for (int k = 0; k < spec.n; ++k) {
    Expr z = Expr::var(chart.x_index(k)) + i * Expr::var(chart.y_index(k));
    out.a[k] = -conj(z) + (spec.mu / 2) * i * z;
  }
  return out;
}

bool model_kmn(const ModelSpec& spec, KMNTriple& out) {
  switch (spec.realization) {
  case Realization::ModelFrame:
  case Realization::ModelGlobalCr:
    out = {Expr(-1.0), Expr(spec.mu), Expr(0.0)};
    return true;
  case Realization::Flat:
  case Realization::ControlTwisted:
  case Realization::ProductKahler:
    out = {Expr(0.0), Expr(0.0), Expr(0.0)};
    return true;
  case Realization::ControlContact:
    return false;
  }
  return false;
}

} // namespace accr
