#include "accr/cr.hpp"

#include <cmath>
#include <sstream>

#include "accr/pack.hpp"

namespace accr {
namespace {

const Expr kI = Expr::imag_unit();

VectorField coord(int dim, int k) { return VectorField::coordinate(dim, k); }

// d/dz^i = 1/2 (d/dx^i - i d/dy^i)
VectorField dz(const ChartDecl& chart, int i) {
  std::vector<Expr> c(chart.dim());
  c[chart.x_index(i)] = 0.5;
  c[chart.y_index(i)] = -0.5 * kI;
  return VectorField(std::move(c));
}

void append(std::vector<Expr>& out, const std::vector<Expr>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

std::string point_text(std::span<const double> p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < p.size(); ++k)
    os << (k ? ", " : "") << p[k];
  os << ")";
  return os.str();
}

} // namespace

Expr CRChartData::r() const {
  Expr s;
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (!g(i, j).is_zero())
        s += a[i] * conj(a[j]) * g(i, j);
  return 1.0 + 2.0 * s;
}

Expr CRChartData::b(int i) const {
  Expr s;
  for (int j = 0; j < n(); ++j)
    if (!g(i, j).is_zero())
      s += conj(a[j]) * g(i, j);
  return -s;
}

void validate_cr_chart(const CRChartData& data, const Sample& sample, double tol) {
  const int n = data.n();
  if (static_cast<int>(data.a.size()) != n ||
      data.hermitian.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("CR chart data: expected " + std::to_string(n) + " coefficients a^i and an " +
                      std::to_string(n) + "x" + std::to_string(n) + " hermitian matrix");
  Pack pack;
  pack.add(data.hermitian);
  ValueTable values = pack.evaluate(sample.points);
  for (std::size_t p = 0; p < sample.points.size(); ++p) {
    Eigen::MatrixXcd m = Row(values.row(p)).matrix(0, n);
    if (max_abs(Eigen::MatrixXcd(m - m.adjoint())) > tol)
      throw DomainError("CR chart data: g_{i jbar} is not hermitian at " +
                        point_text(sample.points[p]));
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().real().array() > 0).all())
      throw DomainError("CR chart data: g_{i jbar} is not positive definite at " +
                        point_text(sample.points[p]));
  }
}

ChartStructure build_from_cr_chart(const CRChartData& data) {
  const ChartDecl& chart = data.chart;
  const int n = chart.n();
  const int dim = chart.dim();
  const int t = ChartDecl::t_index();
  if (static_cast<int>(data.a.size()) != n ||
      data.hermitian.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("CR chart data: shape does not match the chart");

  std::vector<Expr> xi(dim);
  xi[t] = 1.0;
  Tensor11 phi(dim);
  for (int i = 0; i < n; ++i) {
    Expr re = real_part(data.a[i]);
    Expr im = imag_part(data.a[i]);
    xi[chart.x_index(i)] = re;
    xi[chart.y_index(i)] = im;
    phi(chart.y_index(i), chart.x_index(i)) = 1.0;
    phi(chart.x_index(i), chart.y_index(i)) = -1.0;
    phi(chart.x_index(i), t) = im;
    phi(chart.y_index(i), t) = -re;
  }
  KForm eta(1, dim);
  eta.set(t, 1.0);

  MetricField g(dim);
  g.set(t, t, real_part(data.r()));
  for (int i = 0; i < n; ++i) {
    Expr b = data.b(i);
    g.set(t, chart.x_index(i), 2.0 * real_part(b));
    g.set(t, chart.y_index(i), -2.0 * imag_part(b));
    for (int j = 0; j < n; ++j) {
      Expr re = 2.0 * real_part(data.g(i, j));
      if (j >= i) {
        g.set(chart.x_index(i), chart.x_index(j), re);
        g.set(chart.y_index(i), chart.y_index(j), re);
      }
      g.set(chart.x_index(i), chart.y_index(j), 2.0 * imag_part(data.g(i, j)));
    }
  }
  return ChartStructure{chart, std::move(phi), VectorField(std::move(xi)), std::move(eta),
                        std::move(g)};
}

CRChartData extract_cr_chart(const ChartStructure& s) {
  const ChartDecl& chart = s.chart;
  const int n = chart.n();
  CRChartData out{chart, {}, {}};
  for (int i = 0; i < n; ++i)
    out.a.push_back(s.xi[chart.x_index(i)] + kI * s.xi[chart.y_index(i)]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.hermitian.push_back(s.g(dz(chart, i), conj(dz(chart, j))));
  return out;
}

VerificationReport check_cr_relations(const ChartStructure& s, const CRChartData& data,
                                      const Sample& sample, double tol) {
  const ChartDecl& chart = s.chart;
  const int n = chart.n();
  VectorField dt = coord(chart.dim(), ChartDecl::t_index());
  ResidualSet rs;
  rs.add("g(d_t, d_t) - r", {s.g(dt, dt) - data.r()});
  std::vector<Expr> b, iso, herm;
  for (int i = 0; i < n; ++i) {
    b.push_back(s.g(dt, dz(chart, i)) - data.b(i));
    for (int j = 0; j < n; ++j) {
      iso.push_back(s.g(dz(chart, i), dz(chart, j)));
      herm.push_back(s.g(dz(chart, i), conj(dz(chart, j))) - data.g(i, j));
    }
  }
  rs.add("g(d_t, d_z) - b", b);
  rs.add("g(d_z, d_z) = 0", iso);
  rs.add("g(d_z, d_zbar) - g_{i jbar}", herm);
  return rs.evaluate("cr-relations", sample, tol);
}

VerificationReport compare_structures(const ChartStructure& a, const ChartStructure& b,
                                      const Sample& sample, double tol) {
  if (!(a.chart == b.chart))
    throw DomainError("compare: structures live on different charts");
  const int n = a.dim();
  ResidualSet rs;
  rs.add("phi", a.phi - b.phi);
  rs.add("xi", a.xi - b.xi);
  std::vector<Expr> eta(n), g;
  for (int k = 0; k < n; ++k)
    eta[k] = a.eta(k) - b.eta(k);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      g.push_back(a.g(i, j) - b.g(i, j));
  rs.add("eta", eta);
  rs.add("g", g);
  return rs.evaluate("compare", sample, tol);
}

CRSection dprime_section(const ChartStructure& s, const VectorField& x, const Sample& sample,
                         double tol) {
  VectorField z = x - kI * s.phi.apply(x);
  ResidualSet rs;
  rs.add("eta(X)", {s.eta.on({x})});
  rs.add("phi Z - i Z", s.phi.apply(z) - kI * z);
  VerificationReport rep = rs.evaluate("dprime-section", sample, tol);
  if (rep.families[0].max > tol)
    throw DomainError("section: eta(X) does not vanish (max " + std::to_string(rep.families[0].max) +
                      ")");
  if (rep.families[1].max > tol)
    throw DomainError("section: phi Z differs from i Z (max " + std::to_string(rep.families[1].max) +
                      ")");
  return CRSection{x, z};
}

std::vector<CRSection> dprime_spanning_sections(const ChartStructure& s) {
  const int n = s.dim();
  std::vector<CRSection> out;
  for (int c = 0; c < n; ++c) {
    VectorField x = coord(n, c) - s.eta(c) * s.xi;
    bool zero = true;
    for (const auto& e : x.components())
      zero = zero && e.is_zero();
    if (zero)
      continue;
    out.push_back({x, x - kI * s.phi.apply(x)});
  }
  return out;
}

std::vector<Expr> outside_dprime(const ChartStructure& s, const VectorField& w) {
  Expr e = s.eta.on({w});
  VectorField horizontal = w - e * s.xi;
  VectorField dpp = 0.5 * (horizontal + kI * s.phi.apply(horizontal));
  std::vector<Expr> out{e};
  append(out, dpp.components());
  return out;
}

VerificationReport check_cr_integrability(const ChartStructure& s, const Sample& sample,
                                          double tol) {
  std::vector<CRSection> sec = dprime_spanning_sections(s);
  std::vector<Expr> comps;
  for (std::size_t c = 0; c < sec.size(); ++c)
    for (std::size_t d = c + 1; d < sec.size(); ++d)
      append(comps, outside_dprime(s, lie_bracket(sec[c].z, sec[d].z)));
  ResidualSet rs;
  rs.add("[Z, W] outside D'", comps);
  return rs.evaluate("cr-integrability", sample, tol);
}

LeviExprs levi_exprs(const ChartStructure& s, const CRSection& section) {
  Expr bracket = -kI * s.eta.on({lie_bracket(section.z, conj(section.z))});
  KForm deta = exterior_derivative(s.eta);
  Expr form = -4.0 * deta.on({section.x, s.phi.apply(section.x)});
  return {bracket, form};
}

double levi_form(const ChartStructure& s, const CRSection& section, std::span<const double> p) {
  LeviExprs e = levi_exprs(s, section);
  Complex bracket = eval(e.bracket, p);
  Complex form = eval(e.form, p);
  if (!(std::abs(bracket - form) <= 1e-9))
    throw LeviInconsistency("Levi form: bracket and d eta expressions disagree at " +
                            point_text(p));
  return bracket.real();
}

VerificationReport check_levi_flat(const ChartStructure& s, const Sample& sample, double tol) {
  std::vector<CRSection> base = dprime_spanning_sections(s);
  std::vector<CRSection> all = base;
  for (std::size_t c = 0; c < base.size(); ++c)
    for (std::size_t d = c + 1; d < base.size(); ++d)
      all.push_back({base[c].x + base[d].x, base[c].z + base[d].z});
  std::vector<Expr> values, gaps;
  for (const auto& sec : all) {
    LeviExprs e = levi_exprs(s, sec);
    values.push_back(e.bracket);
    gaps.push_back(e.bracket - e.form);
  }
  ResidualSet rs;
  rs.add("Levi form", values);
  rs.add("bracket - (-4 d eta)", gaps);
  return rs.evaluate("levi-form", sample, tol);
}

HermitianConnection::HermitianConnection(Analysis& an, Variant variant)
    : an_(&an), variant_(variant) {}

VectorField HermitianConnection::operator()(const VectorField& x, const VectorField& z) const {
  const ChartStructure& s = an_->structure();
  VectorField arg = variant_ == Variant::Corrected ? z : conj(z);
  Expr coef = s.g(x, an_->tensor_A().apply(arg));
  return covariant_derivative(an_->connection(), x, z) - coef * s.xi;
}

Expr HermitianConnection::hermitian(const VectorField& z, const VectorField& w) const {
  return an_->structure().g(z, conj(w));
}

HermitianReport check_hermitian(Analysis& an, const Sample& sample, double tol,
                                HermitianConnection::Variant variant) {
  VerificationReport leaves = check_kahler_leaves(an, sample, tol);
  if (!leaves.pass)
    throw DomainError("Hermitian connection: structure is not CR-integrable (Kahler-leaves residual " +
                      std::to_string(leaves.max_residual) + ")");
  const ChartStructure& s = an.structure();
  const int n = s.dim();
  HermitianConnection conn(an, variant);
  std::vector<CRSection> sec = dprime_spanning_sections(s);
  std::vector<Expr> valued, compat;
  for (int a = 0; a < n; ++a) {
    VectorField x = coord(n, a);
    std::vector<VectorField> moved;
    for (const auto& z : sec) {
      moved.push_back(conn(x, z.z));
      append(valued, outside_dprime(s, moved.back()));
    }
    for (std::size_t c = 0; c < sec.size(); ++c)
      for (std::size_t d = c; d < sec.size(); ++d)
        compat.push_back(x.apply(conn.hermitian(sec[c].z, sec[d].z)) -
                         conn.hermitian(moved[c], sec[d].z) - conn.hermitian(sec[c].z, moved[d]));
  }
  ResidualSet rv;
  rv.add("nabla'_X Z outside D'", valued);
  ResidualSet rc;
  rc.add("X H(Z, W) - H(nabla' Z, W) - H(Z, nabla' W)", compat);
  return {rv.evaluate("hermitian-dprime", sample, tol),
          rc.evaluate("hermitian-compatibility", sample, tol)};
}

} // namespace accr
