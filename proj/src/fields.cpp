#include "accr/fields.hpp"

#include <algorithm>
#include <array>

namespace accr {
namespace {

void require_same(int a, int b, const char* what) {
  if (a != b)
    throw DomainError(std::string(what) + ": chart mismatch (dimension " + std::to_string(a) +
                      " vs " + std::to_string(b) + ")");
}

// Sign of the permutation sorting idx, or 0 when an index repeats.
int sort_sign(std::array<int, 3>& idx, int k) {
  int sign = 1;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b + 1 < k - a; ++b)
      if (idx[b] > idx[b + 1]) {
        std::swap(idx[b], idx[b + 1]);
        sign = -sign;
      }
  for (int a = 0; a + 1 < k; ++a)
    if (idx[a] == idx[a + 1])
      return 0;
  return sign;
}

} // namespace

VectorField::VectorField(std::vector<Expr> components) : c_(std::move(components)) {
  if (c_.empty())
    throw DomainError("vector field: empty component list");
}

VectorField VectorField::zero(int dim) { return VectorField(std::vector<Expr>(dim)); }

VectorField VectorField::coordinate(int dim, int k) {
  std::vector<Expr> c(dim);
  c.at(k) = 1.0;
  return VectorField(std::move(c));
}

Expr VectorField::apply(const Expr& f) const {
  Expr out;
  for (int j = 0; j < dim(); ++j)
    if (!c_[j].is_zero() && depends_on(f, j))
      out += c_[j] * differentiate(f, j);
  return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same(a.dim(), b.dim(), "vector sum");
  std::vector<Expr> c(a.dim());
  for (int k = 0; k < a.dim(); ++k)
    c[k] = a[k] + b[k];
  return VectorField(std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same(a.dim(), b.dim(), "vector difference");
  std::vector<Expr> c(a.dim());
  for (int k = 0; k < a.dim(); ++k)
    c[k] = a[k] - b[k];
  return VectorField(std::move(c));
}

VectorField operator*(const Expr& f, const VectorField& a) {
  std::vector<Expr> c(a.dim());
  for (int k = 0; k < a.dim(); ++k)
    c[k] = f * a[k];
  return VectorField(std::move(c));
}

VectorField conj(const VectorField& v) {
  std::vector<Expr> c(v.dim());
  for (int k = 0; k < v.dim(); ++k)
    c[k] = conj(v[k]);
  return VectorField(std::move(c));
}

KForm::KForm(int degree, int dim) : degree_(degree), dim_(dim) {
  if (degree < 1 || degree > 3)
    throw DomainError("k-form: degree must be 1, 2 or 3");
  if (dim < 1)
    throw DomainError("k-form: dimension must be positive");
  std::size_t size = 1;
  for (int k = 0; k < degree; ++k)
    size *= static_cast<std::size_t>(dim);
  c_.assign(size, Expr());
}

std::size_t KForm::offset(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != degree_)
    throw DomainError("k-form: wrong number of indices");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_)
      throw DomainError("k-form: index out of range");
    off = off * dim_ + i;
  }
  return off;
}

const Expr& KForm::operator()(int i) const { return c_[offset({i})]; }
const Expr& KForm::operator()(int i, int j) const { return c_[offset({i, j})]; }
const Expr& KForm::operator()(int i, int j, int k) const { return c_[offset({i, j, k})]; }

void KForm::set(int i, const Expr& v) { c_[offset({i})] = v; }

void KForm::set(int i, int j, const Expr& v) {
  std::array<int, 3> idx{i, j, 0};
  int sign = sort_sign(idx, 2);
  if (sign == 0) {
    if (!v.is_zero())
      throw DomainError("k-form: diagonal component of an antisymmetric tensor must vanish");
    return;
  }
  Expr canonical = sign > 0 ? v : -v;
  c_[offset({idx[0], idx[1]})] = canonical;
  c_[offset({idx[1], idx[0]})] = -canonical;
}

void KForm::set(int i, int j, int k, const Expr& v) {
  std::array<int, 3> idx{i, j, k};
  int sign = sort_sign(idx, 3);
  if (sign == 0) {
    if (!v.is_zero())
      throw DomainError("k-form: repeated-index component of an antisymmetric tensor must vanish");
    return;
  }
  Expr canonical = sign > 0 ? v : -v;
  Expr negated = -canonical;
  std::array<int, 3> p = idx;
  // even permutations of the sorted tuple carry +, odd carry -
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  for (int q = 0; q < 6; ++q)
    c_[offset({p[perms[q][0]], p[perms[q][1]], p[perms[q][2]]})] = q < 3 ? canonical : negated;
}

std::vector<Expr> KForm::independent_components() const {
  std::vector<Expr> out;
  if (degree_ == 1)
    return c_;
  if (degree_ == 2) {
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        out.push_back((*this)(i, j));
    return out;
  }
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k)
        out.push_back((*this)(i, j, k));
  return out;
}

Expr KForm::on(const std::vector<VectorField>& fields) const {
  if (static_cast<int>(fields.size()) != degree_)
    throw DomainError("k-form: wrong number of arguments");
  for (const auto& f : fields)
    require_same(f.dim(), dim_, "k-form evaluation");
  Expr out;
  if (degree_ == 1) {
    for (int i = 0; i < dim_; ++i)
      if (!c_[i].is_zero())
        out += c_[i] * fields[0][i];
    return out;
  }
  if (degree_ == 2) {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const Expr& w = (*this)(i, j);
        if (!w.is_zero())
          out += w * fields[0][i] * fields[1][j];
      }
    return out;
  }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        const Expr& w = (*this)(i, j, k);
        if (!w.is_zero())
          out += w * fields[0][i] * fields[1][j] * fields[2][k];
      }
  return out;
}

Tensor11::Tensor11(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim) * dim) {
  if (dim < 1)
    throw DomainError("tensor: dimension must be positive");
}

Tensor11 Tensor11::identity(int dim) {
  Tensor11 t(dim);
  for (int i = 0; i < dim; ++i)
    t(i, i) = 1.0;
  return t;
}

Tensor11 Tensor11::outer(const VectorField& x, const KForm& alpha) {
  if (alpha.degree() != 1)
    throw DomainError("tensor outer product needs a 1-form");
  require_same(x.dim(), alpha.dim(), "tensor outer product");
  Tensor11 t(x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      t(i, j) = x[i] * alpha(j);
  return t;
}

VectorField Tensor11::apply(const VectorField& x) const {
  require_same(dim_, x.dim(), "tensor application");
  std::vector<Expr> out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      const Expr& t = (*this)(i, j);
      if (!t.is_zero() && !x[j].is_zero())
        out[i] += t * x[j];
    }
  return VectorField(std::move(out));
}

VectorField Tensor11::column(int j) const {
  std::vector<Expr> out(dim_);
  for (int i = 0; i < dim_; ++i)
    out[i] = (*this)(i, j);
  return VectorField(std::move(out));
}

Tensor11 operator+(const Tensor11& a, const Tensor11& b) {
  require_same(a.dim(), b.dim(), "tensor sum");
  Tensor11 t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      t(i, j) = a(i, j) + b(i, j);
  return t;
}

Tensor11 operator-(const Tensor11& a, const Tensor11& b) {
  require_same(a.dim(), b.dim(), "tensor difference");
  Tensor11 t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      t(i, j) = a(i, j) - b(i, j);
  return t;
}

Tensor11 operator*(const Expr& f, const Tensor11& a) {
  Tensor11 t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      t(i, j) = f * a(i, j);
  return t;
}

Tensor11 operator*(const Tensor11& a, const Tensor11& b) {
  require_same(a.dim(), b.dim(), "tensor composition");
  int n = a.dim();
  Tensor11 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr s;
      for (int k = 0; k < n; ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero())
          s += a(i, k) * b(k, j);
      t(i, j) = s;
    }
  return t;
}

MetricField::MetricField(int dim) : dim_(dim), c_(static_cast<std::size_t>(dim) * dim) {
  if (dim < 1)
    throw DomainError("metric: dimension must be positive");
}

MetricField MetricField::identity(int dim) {
  MetricField g(dim);
  for (int i = 0; i < dim; ++i)
    g.set(i, i, 1.0);
  std::vector<Expr> inv(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i)
    inv[i * dim + i] = 1.0;
  g.set_known_inverse(std::move(inv));
  return g;
}

void MetricField::set(int i, int j, const Expr& v) {
  c_[i * dim_ + j] = v;
  c_[j * dim_ + i] = v;
  inverse_.reset();
}

void MetricField::set_known_inverse(std::vector<Expr> inverse) {
  if (static_cast<int>(inverse.size()) != dim_ * dim_)
    throw DomainError("metric: inverse has the wrong shape");
  inverse_ = std::move(inverse);
}

Expr MetricField::operator()(const VectorField& x, const VectorField& y) const {
  require_same(dim_, x.dim(), "metric");
  require_same(dim_, y.dim(), "metric");
  Expr out;
  for (int i = 0; i < dim_; ++i) {
    if (x[i].is_zero())
      continue;
    for (int j = 0; j < dim_; ++j) {
      const Expr& g = (*this)(i, j);
      if (!g.is_zero() && !y[j].is_zero())
        out += g * x[i] * y[j];
    }
  }
  return out;
}

KForm MetricField::lower(const VectorField& x) const {
  require_same(dim_, x.dim(), "metric lowering");
  KForm w(1, dim_);
  for (int j = 0; j < dim_; ++j) {
    Expr s;
    for (int i = 0; i < dim_; ++i)
      if (!x[i].is_zero() && !(*this)(i, j).is_zero())
        s += (*this)(i, j) * x[i];
    w.set(j, s);
  }
  return w;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same(x.dim(), y.dim(), "lie bracket");
  std::vector<Expr> out(x.dim());
  for (int k = 0; k < x.dim(); ++k)
    out[k] = x.apply(y[k]) - y.apply(x[k]);
  return VectorField(std::move(out));
}

KForm exterior_derivative(const KForm& form) {
  const int n = form.dim();
  if (form.degree() == 1) {
    KForm d(2, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        d.set(i, j, 0.5 * (differentiate(form(j), i) - differentiate(form(i), j)));
    return d;
  }
  if (form.degree() == 2) {
    KForm d(3, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          d.set(i, j, k,
                (1.0 / 3.0) * (differentiate(form(j, k), i) + differentiate(form(k, i), j) +
                               differentiate(form(i, j), k)));
    return d;
  }
  throw DomainError("exterior derivative: unsupported degree " + std::to_string(form.degree()));
}

KForm differential(const Expr& f, int dim) {
  KForm d(1, dim);
  for (int i = 0; i < dim; ++i)
    d.set(i, differentiate(f, i));
  return d;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.degree() != 1 || b.degree() != 1)
    throw DomainError("wedge: only 1-forms are supported");
  require_same(a.dim(), b.dim(), "wedge");
  KForm w(2, a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j)
      w.set(i, j, 0.5 * (a(i) * b(j) - a(j) * b(i)));
  return w;
}

Tensor11 lie_derivative(const VectorField& x, const Tensor11& t) {
  require_same(x.dim(), t.dim(), "lie derivative");
  const int n = x.dim();
  Tensor11 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr s = x.apply(t(i, j));
      for (int k = 0; k < n; ++k) {
        if (!t(k, j).is_zero())
          s -= t(k, j) * differentiate(x[i], k);
        if (!t(i, k).is_zero())
          s += t(i, k) * differentiate(x[k], j);
      }
      out(i, j) = s;
    }
  return out;
}

std::vector<VectorField> complexify_frame(const ChartDecl& chart) {
  const int dim = chart.dim();
  std::vector<VectorField> frame{VectorField::coordinate(dim, ChartDecl::t_index())};
  const Expr half_i = Expr::imag_unit() * 0.5;
  for (int i = 0; i < chart.n(); ++i) {
    std::vector<Expr> c(dim);
    c[chart.x_index(i)] = 0.5;
    c[chart.y_index(i)] = -half_i;
    frame.emplace_back(std::move(c));
  }
  for (int i = 0; i < chart.n(); ++i)
    frame.push_back(conj(frame[1 + i]));
  return frame;
}

KForm one_form(std::vector<Expr> components) {
  KForm w(1, static_cast<int>(components.size()));
  for (int i = 0; i < static_cast<int>(components.size()); ++i)
    w.set(i, components[i]);
  return w;
}

} // namespace accr
