#include "accr/accs.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "accr/pack.hpp"

namespace accr {
namespace {

double modulus(Complex v) {
  double a = std::abs(v);
  return std::isfinite(a) ? a : std::numeric_limits<double>::infinity();
}

VectorField coord(int dim, int k) { return VectorField::coordinate(dim, k); }

// g(V, d_b) as a 1-form row, i.e. the lowered vector.
Expr lower_at(const MetricField& g, const VectorField& v, int b) {
  Expr s;
  for (int k = 0; k < g.dim(); ++k)
    if (!v[k].is_zero() && !g(k, b).is_zero())
      s += v[k] * g(k, b);
  return s;
}

Tensor11 curvature_block(const CurvatureData& curv, int i, int j) {
  const int n = curv.dim();
  Tensor11 m(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      m(l, k) = curv(l, i, j, k);
  return m;
}

Tensor11 combination(int dim, const Expr& kappa, const Expr& mu, const Expr& nu, const Tensor11& h,
                     const Tensor11& a) {
  return kappa * Tensor11::identity(dim) + mu * h + nu * a;
}

} // namespace

Sample Sample::draw(const ChartDecl& chart, std::uint64_t seed, std::size_t count) {
  return Sample{seed, sample_points(chart, seed, count)};
}

void ResidualSet::add(std::string family, std::vector<Expr> components) {
  names_.push_back(std::move(family));
  families_.push_back(std::move(components));
}

void ResidualSet::add(std::string family, const Tensor11& t) {
  std::vector<Expr> c;
  c.reserve(static_cast<std::size_t>(t.dim()) * t.dim());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      c.push_back(t(i, j));
  add(std::move(family), std::move(c));
}

VerificationReport ResidualSet::evaluate(std::string name, const Sample& sample,
                                         double tol) const {
  Pack pack;
  std::vector<std::size_t> offsets;
  for (const auto& f : families_)
    offsets.push_back(pack.add(f));
  ValueTable values = pack.evaluate(sample.points);

  VerificationReport rep;
  rep.name = std::move(name);
  rep.points = sample.points.size();
  rep.tolerance = tol;
  rep.seed = sample.seed;
  rep.families.resize(families_.size());
  for (std::size_t f = 0; f < families_.size(); ++f)
    rep.families[f].name = names_[f];

  double total = 0.0;
  for (std::size_t p = 0; p < rep.points; ++p) {
    auto row = values.row(p);
    double point_max = 0.0;
    for (std::size_t f = 0; f < families_.size(); ++f) {
      double m = 0.0;
      for (std::size_t c = 0; c < families_[f].size(); ++c)
        m = std::max(m, modulus(row[offsets[f] + c]));
      rep.families[f].max = std::max(rep.families[f].max, m);
      rep.families[f].mean += m;
      point_max = std::max(point_max, m);
    }
    rep.max_residual = std::max(rep.max_residual, point_max);
    total += point_max;
  }
  if (rep.points > 0) {
    rep.mean_residual = total / static_cast<double>(rep.points);
    for (auto& f : rep.families)
      f.mean /= static_cast<double>(rep.points);
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

Analysis::Analysis(ChartStructure s) : s_(std::move(s)) {}

const ConnectionData& Analysis::connection() {
  if (!conn_)
    conn_.emplace(christoffel(s_.g));
  return *conn_;
}

const CurvatureData& Analysis::curvature() {
  if (!curv_)
    curv_.emplace(accr::curvature(connection()));
  return *curv_;
}

const Tensor11& Analysis::tensor_A() {
  if (!a_) {
    const int n = dim();
    Tensor11 a(n);
    for (int j = 0; j < n; ++j) {
      VectorField col = covariant_derivative(connection(), coord(n, j), s_.xi);
      for (int i = 0; i < n; ++i)
        a(i, j) = -col[i];
    }
    a_ = std::move(a);
  }
  return *a_;
}

const Tensor11& Analysis::tensor_h() {
  if (!h_)
    h_ = 0.5 * lie_derivative(s_.xi, s_.phi);
  return *h_;
}

const KForm& Analysis::fundamental_form() {
  if (!phi_form_)
    phi_form_ = accr::fundamental_form(s_);
  return *phi_form_;
}

// Antisymmetrized, so a metric that is not phi-compatible still shows up in d Phi.
KForm fundamental_form(const ChartStructure& s) {
  const int n = s.dim();
  KForm out(2, n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      out.set(a, b, 0.5 * (lower_at(s.g, s.phi.column(a), b) - lower_at(s.g, s.phi.column(b), a)));
  return out;
}

VectorField nijenhuis(const ChartStructure& s, const VectorField& x, const VectorField& y) {
  const Tensor11& phi = s.phi;
  VectorField px = phi.apply(x);
  VectorField py = phi.apply(y);
  return phi.apply(phi.apply(lie_bracket(x, y))) + lie_bracket(px, py) -
         phi.apply(lie_bracket(px, y)) - phi.apply(lie_bracket(x, py));
}

VectorField nijenhuis(const ChartStructure& s, int a, int b) {
  return nijenhuis(s, coord(s.dim(), a), coord(s.dim(), b));
}

Tensor11 tensor_A(Analysis& an) { return an.tensor_A(); }
Tensor11 tensor_h(Analysis& an) { return an.tensor_h(); }

VerificationReport check_acm_axioms(const ChartStructure& s, const Sample& sample, double tol) {
  const int n = s.dim();
  ResidualSet rs;
  rs.add("phi^2 = -I + eta(x)xi",
         s.phi * s.phi + Tensor11::identity(n) - Tensor11::outer(s.xi, s.eta));
  rs.add("eta(xi) = 1", {s.eta.on({s.xi}) - 1.0});
  rs.add("phi xi = 0", s.phi.apply(s.xi));
  std::vector<Expr> eta_phi(n), dual(n), compat;
  for (int a = 0; a < n; ++a) {
    eta_phi[a] = s.eta.on({s.phi.column(a)});
    dual[a] = s.eta(a) - lower_at(s.g, s.xi, a);
  }
  rs.add("eta o phi = 0", eta_phi);
  for (int a = 0; a < n; ++a) {
    VectorField pa = s.phi.column(a);
    for (int b = a; b < n; ++b)
      compat.push_back(s.g(pa, s.phi.column(b)) - s.g(a, b) + s.eta(a) * s.eta(b));
  }
  rs.add("g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)", compat);
  rs.add("eta(X) = g(X, xi)", dual);
  return rs.evaluate("acm-axioms", sample, tol);
}

VerificationReport check_almost_cosymplectic(Analysis& an, const Sample& sample, double tol) {
  ResidualSet rs;
  rs.add("d eta", exterior_derivative(an.structure().eta).independent_components());
  rs.add("d Phi", exterior_derivative(an.fundamental_form()).independent_components());
  return rs.evaluate("almost-cosymplectic", sample, tol);
}

VerificationReport check_normal(const ChartStructure& s, const Sample& sample, double tol) {
  const int n = s.dim();
  KForm deta = exterior_derivative(s.eta);
  std::vector<Expr> comps;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      VectorField r = nijenhuis(s, a, b) + (2.0 * deta(a, b)) * s.xi;
      comps.insert(comps.end(), r.components().begin(), r.components().end());
    }
  ResidualSet rs;
  rs.add("N_phi + 2 d eta (x) xi", comps);
  return rs.evaluate("normality", sample, tol);
}

VerificationReport check_nabla_phi(Analysis& an, const Sample& sample, double tol) {
  const int n = an.dim();
  ResidualSet rs;
  for (int a = 0; a < n; ++a)
    rs.add("nabla_" + an.structure().chart.names()[a] + " phi",
           covariant_derivative(an.connection(), coord(n, a), an.structure().phi));
  return rs.evaluate("nabla-phi", sample, tol);
}

VerificationReport check_goldberg_yano(Analysis& an, const Sample& sample, double tol) {
  const int n = an.dim();
  const Tensor11& phi = an.structure().phi;
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Tensor11 r = curvature_block(an.curvature(), i, j);
      Tensor11 d = r * phi - phi * r;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          comps.push_back(d(a, b));
    }
  ResidualSet rs;
  rs.add("R(X,Y) phi - phi R(X,Y)", comps);
  return rs.evaluate("goldberg-yano", sample, tol);
}

bool CosymplecticReport::coherent() const {
  return normal.pass == nabla_phi.pass && nabla_phi.pass == goldberg_yano.pass;
}

bool CosymplecticReport::cosymplectic() const {
  return normal.pass && nabla_phi.pass && goldberg_yano.pass;
}

CosymplecticReport check_cosymplectic(Analysis& an, const Sample& sample, double tol) {
  return {check_normal(an.structure(), sample, tol), check_nabla_phi(an, sample, tol),
          check_goldberg_yano(an, sample, tol)};
}

VerificationReport check_kahler_leaves(Analysis& an, const Sample& sample, double tol) {
  const ChartStructure& s = an.structure();
  const int n = s.dim();
  Tensor11 phi_a = s.phi * an.tensor_A();
  std::vector<Expr> comps;
  for (int a = 0; a < n; ++a) {
    Tensor11 dphi = covariant_derivative(an.connection(), coord(n, a), s.phi);
    VectorField pa = phi_a.column(a);
    for (int b = 0; b < n; ++b) {
      VectorField r = dphi.column(b) + lower_at(s.g, pa, b) * s.xi - s.eta(b) * pa;
      comps.insert(comps.end(), r.components().begin(), r.components().end());
    }
  }
  ResidualSet rs;
  rs.add("(nabla_X phi) Y + g(phi A X, Y) xi - eta(Y) phi A X", comps);
  return rs.evaluate("kahler-leaves", sample, tol);
}

VerificationReport check_kmn(Analysis& an, const Expr& kappa, const Expr& mu, const Expr& nu,
                             const Sample& sample, double tol) {
  const ChartStructure& s = an.structure();
  const int n = s.dim();
  Tensor11 p = combination(n, kappa, mu, nu, an.tensor_h(), an.tensor_A());
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VectorField r = curvature_block(an.curvature(), i, j).apply(s.xi) -
                      s.eta(j) * p.column(i) + s.eta(i) * p.column(j);
      comps.insert(comps.end(), r.components().begin(), r.components().end());
    }
  ResidualSet rs;
  rs.add("R(X,Y)xi - eta(Y) P X + eta(X) P Y", comps);
  rs.add("d kappa ^ eta", wedge(differential(kappa, n), s.eta).independent_components());
  rs.add("d mu ^ eta", wedge(differential(mu, n), s.eta).independent_components());
  rs.add("d nu ^ eta", wedge(differential(nu, n), s.eta).independent_components());
  return rs.evaluate("kmn", sample, tol);
}

VerificationReport check_kmn_relations(Analysis& an, const Expr& kappa, const Expr& mu,
                                       const Expr& nu, const Sample& sample, double tol) {
  const ChartStructure& s = an.structure();
  const int n = s.dim();
  const Tensor11& a = an.tensor_A();
  const Tensor11& h = an.tensor_h();
  ResidualSet rs;
  rs.add("A^2 + kappa (Id - eta(x)xi)",
         a * a + kappa * (Tensor11::identity(n) - Tensor11::outer(s.xi, s.eta)));
  rs.add("nabla_xi A - mu h - nu A",
         covariant_derivative(an.connection(), s.xi, a) - mu * h - nu * a);
  rs.add("d kappa(xi) - 2 nu kappa", {s.xi.apply(kappa) - 2.0 * nu * kappa});
  return rs.evaluate("kmn-relations", sample, tol);
}

KMNEstimator::KMNEstimator(Analysis& an)
    : dim_(an.dim()), kernel_([&an] {
        const ChartStructure& s = an.structure();
        Pack pack;
        pack.add(s.g);
        pack.add(s.eta.independent_components());
        pack.add(s.xi);
        pack.add(an.tensor_h());
        pack.add(an.tensor_A());
        pack.add(an.curvature().blocks());
        return pack.compile();
      }()) {}

KMNFit KMNEstimator::at(std::span<const double> p, const std::vector<int>& order) const {
  const int n = dim_;
  std::vector<Complex> v(kernel_.size());
  std::vector<Complex> scratch;
  kernel_.evaluate(p, {}, v, scratch);
  Row row(v);
  std::size_t off = 0;
  Eigen::MatrixXd g = row.matrix(off, n).real();
  off += static_cast<std::size_t>(n) * n;
  Eigen::VectorXd eta = row.vector(off, n).real();
  off += n;
  Eigen::VectorXcd xi_c = row.vector(off, n);
  Eigen::VectorXd xi = xi_c.real();
  off += n;
  Eigen::MatrixXd h = row.matrix(off, n).real();
  off += static_cast<std::size_t>(n) * n;
  Eigen::MatrixXd a = row.matrix(off, n).real();
  off += static_cast<std::size_t>(n) * n;
  std::span<const Complex> blocks(v.data() + off, v.size() - off);

  std::vector<int> ord = order;
  if (ord.empty()) {
    for (int k = 1; k < n; ++k)
      ord.push_back(k);
    ord.push_back(0);
  }
  // orthonormal basis of ker eta from the projected coordinate vectors
  std::vector<Eigen::VectorXd> basis;
  for (int c : ord) {
    if (static_cast<int>(basis.size()) == n - 1)
      break;
    Eigen::VectorXd u = Eigen::VectorXd::Unit(n, c) - eta(c) * xi;
    for (const auto& e : basis)
      u -= e.dot(g * u) * e;
    double norm2 = u.dot(g * u);
    if (norm2 <= 1e-16)
      continue;
    basis.push_back(u / std::sqrt(norm2));
  }

  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  std::vector<std::array<Eigen::VectorXd, 3>> terms;
  std::vector<Eigen::VectorXd> targets;
  for (const auto& e : basis) {
    Eigen::MatrixXd r = curvature_operator(n, blocks, xi_c, e.cast<Complex>()).real();
    Eigen::VectorXd pe = -r * xi;
    std::array<Eigen::VectorXd, 3> b{e, h * e, a * e};
    for (int u = 0; u < 3; ++u) {
      rhs(u) += b[u].dot(g * pe);
      for (int w = 0; w < 3; ++w)
        gram(u, w) += b[u].dot(g * b[w]);
    }
    terms.push_back(std::move(b));
    targets.push_back(std::move(pe));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
  double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::Vector3d sol = Eigen::Vector3d::Zero();
  Eigen::Vector3d null_weight = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) {
    double lambda = eig.eigenvalues()(k);
    Eigen::Vector3d vk = eig.eigenvectors().col(k);
    if (lambda > 1e-10 * scale)
      sol += vk * (vk.dot(rhs) / lambda);
    else
      null_weight += vk.cwiseAbs2();
  }

  KMNFit fit;
  for (int k = 0; k < 3; ++k) {
    fit.value[k] = sol(k);
    fit.determined[k] = std::sqrt(null_weight(k)) <= 1e-8;
  }
  double res = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Eigen::VectorXd d = targets[i] - sol(0) * terms[i][0] - sol(1) * terms[i][1] - sol(2) * terms[i][2];
    res += d.dot(g * d);
  }
  fit.residual = std::sqrt(std::max(res, 0.0));
  return fit;
}

KMNFit estimate_kmn(Analysis& an, std::span<const double> p, const std::vector<int>& order) {
  return KMNEstimator(an).at(p, order);
}

VerificationReport check_deformation_admissible(const ChartStructure& s, const Deformation& d,
                                                const Sample& sample, double tol) {
  ResidualSet rs;
  rs.add("d beta ^ eta", wedge(differential(d.beta, s.dim()), s.eta).independent_components());
  return rs.evaluate("deformation-admissible", sample, tol);
}

ChartStructure d_conformal_deform(const ChartStructure& s, const Deformation& d,
                                  const Sample& sample, double tol) {
  if (!(d.alpha > 0.0) || !std::isfinite(d.alpha))
    throw DeformationRejected("deformation: alpha must be a positive constant", {});
  VerificationReport rep = check_deformation_admissible(s, d, sample, tol);
  if (!rep.pass)
    throw DeformationRejected("deformation: d beta ^ eta does not vanish", rep);
  for (std::size_t k = 0; k < sample.points.size(); ++k) {
    Complex b = eval(d.beta, sample.points[k]);
    if (!(b.real() > 0.0) || std::abs(b.imag()) > tol)
      throw DeformationRejected("deformation: beta must be positive", rep);
  }
  return d_conformal_deform_unchecked(s, d);
}

ChartStructure d_conformal_deform_unchecked(const ChartStructure& s, const Deformation& d) {
  if (d.alpha == 1.0 && d.beta.is_one())
    return s;
  const int n = s.dim();
  Expr alpha = d.alpha;
  Expr inv_beta = 1.0 / d.beta;
  VectorField xi = inv_beta * s.xi;
  KForm eta(1, n);
  for (int a = 0; a < n; ++a)
    eta.set(a, d.beta * s.eta(a));
  Expr shift = d.beta * d.beta - alpha;
  MetricField g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      g.set(a, b, alpha * s.g(a, b) + shift * s.eta(a) * s.eta(b));
  if (const auto& inv = s.g.known_inverse()) {
    // g'^{-1} = (g^{-1} - xi xi^T) / alpha + xi xi^T / beta^2
    std::vector<Expr> out(static_cast<std::size_t>(n) * n);
    Expr inv_alpha = 1.0 / d.alpha;
    Expr inv_beta2 = inv_beta * inv_beta;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr xx = s.xi[a] * s.xi[b];
        out[a * n + b] = inv_alpha * ((*inv)[a * n + b] - xx) + inv_beta2 * xx;
      }
    g.set_known_inverse(std::move(out));
  }
  return ChartStructure{s.chart, s.phi, std::move(xi), std::move(eta), std::move(g)};
}

Deformation inverse_deformation(const Deformation& d) {
  return Deformation{1.0 / d.alpha, 1.0 / d.beta};
}

PerroneEvaluator::PerroneEvaluator(Analysis& an)
    : dim_(an.dim()), kernel_([&an] {
        if (an.dim() != 3)
          throw DomainError("Perrone invariant: only defined for dimension 3 (n = 1), got dimension " +
                            std::to_string(an.dim()));
        Pack pack;
        pack.add(an.structure().g);
        pack.add(an.tensor_h());
        pack.add(lie_derivative(an.structure().xi, an.tensor_h()));
        return pack.compile();
      }()) {}

PerroneValue PerroneEvaluator::at(std::span<const double> p) const {
  const int n = dim_;
  std::vector<Complex> v(kernel_.size());
  std::vector<Complex> scratch;
  kernel_.evaluate(p, {}, v, scratch);
  Row row(v);
  std::size_t block = static_cast<std::size_t>(n) * n;
  Eigen::MatrixXd g = row.matrix(0, n).real();
  PerroneValue out;
  out.norm_h = tensor_norm(g, row.matrix(block, n).real());
  out.norm_lie_h = tensor_norm(g, row.matrix(2 * block, n).real());
  out.p = out.norm_lie_h - 2.0 * out.norm_h * out.norm_h;
  out.p_squared_reading = out.norm_lie_h * out.norm_lie_h - 2.0 * out.norm_h * out.norm_h;
  return out;
}

PerroneValue perrone_p(Analysis& an, std::span<const double> p) {
  return PerroneEvaluator(an).at(p);
}

} // namespace accr
