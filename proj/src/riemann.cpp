#include "accr/riemann.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "accr/pack.hpp"

namespace accr {

ConnectionData::ConnectionData(MetricField metric, std::vector<Expr> inverse,
                               std::vector<Expr> gamma)
    : metric_(std::move(metric)), inverse_(std::move(inverse)), gamma_(std::move(gamma)) {}

CurvatureData::CurvatureData(int dim, std::vector<Expr> lower_pairs)
    : dim_(dim), c_(std::move(lower_pairs)) {
  std::size_t pairs = static_cast<std::size_t>(dim) * (dim - 1) / 2;
  if (c_.size() != pairs * dim * dim)
    throw DomainError("curvature: wrong number of components");
}

std::size_t CurvatureData::block_offset(int i, int j) const {
  // rank of the pair (i, j), i < j, in lexicographic order
  std::size_t rank = static_cast<std::size_t>(i) * (2 * dim_ - i - 1) / 2 + (j - i - 1);
  return rank * dim_ * dim_;
}

Expr CurvatureData::operator()(int l, int i, int j, int k) const {
  if (i == j)
    return Expr();
  if (i > j)
    return -(*this)(l, j, i, k);
  return c_[block_offset(i, j) + static_cast<std::size_t>(l) * dim_ + k];
}

namespace {

class DeterminantBuilder {
public:
  explicit DeterminantBuilder(const MetricField& g) : g_(g), n_(g.dim()) {}

  // Determinant of the submatrix on the given row and column masks (equal popcount).
  Expr det(unsigned rows, unsigned cols) {
    if (rows == 0)
      return 1.0;
    auto key = std::make_pair(rows, cols);
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
    int r = std::countr_zero(rows);
    unsigned rest = rows & (rows - 1);
    Expr out;
    int pos = 0;
    for (int c = 0; c < n_; ++c) {
      if (!((cols >> c) & 1U))
        continue;
      const Expr& entry = g_(r, c);
      if (!entry.is_zero()) {
        Expr minor = det(rest, cols & ~(1U << c));
        if (!minor.is_zero()) {
          Expr term = entry * minor;
          out = (pos % 2 == 0) ? out + term : out - term;
        }
      }
      ++pos;
    }
    memo_.emplace(key, out);
    return out;
  }

private:
  const MetricField& g_;
  int n_;
  std::map<std::pair<unsigned, unsigned>, Expr> memo_;
};

void require_symbolic_dim(int dim) {
  if (dim > kMaxSymbolicDim)
    throw DomainError("symbolic metric inversion is limited to dimension " +
                      std::to_string(kMaxSymbolicDim) + "; use NumericCurvature");
}

} // namespace

Expr determinant(const MetricField& g) {
  require_symbolic_dim(g.dim());
  DeterminantBuilder b(g);
  unsigned all = (1U << g.dim()) - 1;
  return b.det(all, all);
}

std::vector<Expr> adjugate_inverse(const MetricField& g) {
  require_symbolic_dim(g.dim());
  const int n = g.dim();
  DeterminantBuilder b(g);
  unsigned all = (1U << n) - 1;
  Expr det = b.det(all, all);
  std::vector<Expr> inv(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // (g^{-1})_{ij} = cofactor_{ji} / det; symmetric so cofactor_{ij} serves
      Expr minor = b.det(all & ~(1U << j), all & ~(1U << i));
      Expr cof = ((i + j) % 2 == 0) ? minor : -minor;
      Expr v = cof / det;
      inv[i * n + j] = v;
      inv[j * n + i] = v;
    }
  return inv;
}

std::vector<Expr> inverse_metric(const MetricField& g) {
  if (g.known_inverse())
    return *g.known_inverse();
  return adjugate_inverse(g);
}

void require_positive_definite(const MetricField& g, const PointSet& points) {
  Pack pack;
  pack.add(g);
  ValueTable values = pack.evaluate(points);
  const int n = g.dim();
  for (std::size_t p = 0; p < points.size(); ++p) {
    Eigen::MatrixXcd m = Row(values.row(p)).matrix(0, n);
    Eigen::LLT<Eigen::MatrixXd> llt(m.real());
    bool ok = m.allFinite() && m.imag().cwiseAbs().maxCoeff() <= 1e-12 * (1 + max_abs(m)) &&
              llt.info() == Eigen::Success;
    if (ok) {
      // LLT does not detect every indefinite input; check the factor too
      Eigen::MatrixXd l = llt.matrixL();
      ok = (l.diagonal().array() > 0).all();
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "metric is singular or not positive definite at point (";
      for (int k = 0; k < points.dim(); ++k)
        msg << (k ? ", " : "") << points[p][k];
      msg << ")";
      throw DomainError(msg.str());
    }
  }
}

ConnectionData christoffel(const MetricField& g) {
  const int n = g.dim();
  std::vector<Expr> inv = inverse_metric(g);
  Differentiator d;
  // dg[a][i][j] = d_a g_ij
  std::vector<Expr> dg(static_cast<std::size_t>(n) * n * n);
  auto at = [n](int a, int i, int j) { return (static_cast<std::size_t>(a) * n + i) * n + j; };
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Expr v = d(g(i, j), a);
        dg[at(a, i, j)] = v;
        dg[at(a, j, i)] = v;
      }
  std::vector<Expr> gamma(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // first-kind symbols c_l = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
      std::vector<Expr> first(n);
      for (int l = 0; l < n; ++l)
        first[l] = 0.5 * (dg[at(i, j, l)] + dg[at(j, i, l)] - dg[at(l, i, j)]);
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int l = 0; l < n; ++l)
          if (!first[l].is_zero() && !inv[k * n + l].is_zero())
            s += inv[k * n + l] * first[l];
        gamma[at(k, i, j)] = s;
        gamma[at(k, j, i)] = s;
      }
    }
  return ConnectionData(g, std::move(inv), std::move(gamma));
}

CurvatureData curvature(const ConnectionData& conn) {
  const int n = conn.dim();
  Differentiator d;
  std::vector<Expr> blocks;
  blocks.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
          Expr r = d(conn(l, j, k), i) - d(conn(l, i, k), j);
          for (int m = 0; m < n; ++m) {
            const Expr& a = conn(l, i, m);
            const Expr& b = conn(m, j, k);
            if (!a.is_zero() && !b.is_zero())
              r += a * b;
            const Expr& c = conn(l, j, m);
            const Expr& e = conn(m, i, k);
            if (!c.is_zero() && !e.is_zero())
              r -= c * e;
          }
          blocks.push_back(r);
        }
  return CurvatureData(n, std::move(blocks));
}

VectorField covariant_derivative(const ConnectionData& conn, const VectorField& x,
                                 const VectorField& y) {
  const int n = conn.dim();
  if (x.dim() != n || y.dim() != n)
    throw DomainError("covariant derivative: chart mismatch");
  std::vector<Expr> out(n);
  for (int k = 0; k < n; ++k) {
    Expr s;
    for (int i = 0; i < n; ++i) {
      if (x[i].is_zero())
        continue;
      Expr inner = differentiate(y[k], i);
      for (int j = 0; j < n; ++j)
        if (!conn(k, i, j).is_zero() && !y[j].is_zero())
          inner += conn(k, i, j) * y[j];
      if (!inner.is_zero())
        s += x[i] * inner;
    }
    out[k] = s;
  }
  return VectorField(std::move(out));
}

Tensor11 covariant_derivative(const ConnectionData& conn, const VectorField& x,
                              const Tensor11& t) {
  const int n = conn.dim();
  if (x.dim() != n || t.dim() != n)
    throw DomainError("covariant derivative: chart mismatch");
  Tensor11 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr s;
      for (int k = 0; k < n; ++k) {
        if (x[k].is_zero())
          continue;
        Expr inner = differentiate(t(i, j), k);
        for (int m = 0; m < n; ++m) {
          if (!conn(i, k, m).is_zero() && !t(m, j).is_zero())
            inner += conn(i, k, m) * t(m, j);
          if (!conn(m, k, j).is_zero() && !t(i, m).is_zero())
            inner -= conn(m, k, j) * t(i, m);
        }
        if (!inner.is_zero())
          s += x[k] * inner;
      }
      out(i, j) = s;
    }
  return out;
}

Eigen::MatrixXcd curvature_operator(int n, std::span<const Complex> blocks,
                                    const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  std::size_t off = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Complex w = x(i) * y(j) - x(j) * y(i);
      if (w != Complex{})
        for (int l = 0; l < n; ++l)
          for (int k = 0; k < n; ++k)
            out(l, k) += w * blocks[off + static_cast<std::size_t>(l) * n + k];
      off += static_cast<std::size_t>(n) * n;
    }
  return out;
}

Eigen::VectorXcd curvature_apply(const CurvatureData& curv, const VectorField& x,
                                 const VectorField& y, const VectorField& z,
                                 std::span<const double> p) {
  const int n = curv.dim();
  if (x.dim() != n || y.dim() != n || z.dim() != n)
    throw DomainError("curvature: chart mismatch");
  std::vector<Complex> blocks;
  blocks.reserve(curv.blocks().size());
  for (const auto& e : curv.blocks())
    blocks.push_back(eval(e, p));
  Eigen::MatrixXcd r = curvature_operator(n, blocks, eval_vector(x, p), eval_vector(y, p));
  return r * eval_vector(z, p);
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& g, std::vector<int> order) {
  const int n = static_cast<int>(g.rows());
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  Eigen::MatrixXd basis(n, n);
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, order[a]);
    for (int b = 0; b < a; ++b)
      v -= (basis.col(b).dot(g * v)) * basis.col(b);
    double norm2 = v.dot(g * v);
    if (!(norm2 > 0.0))
      throw DomainError("metric is not positive definite at the evaluation point");
    basis.col(a) = v / std::sqrt(norm2);
  }
  return basis;
}

double tensor_norm(const Eigen::MatrixXd& g, const Eigen::MatrixXd& t) {
  Eigen::MatrixXd e = orthonormal_basis(g);
  double s = 0.0;
  for (int a = 0; a < e.cols(); ++a) {
    Eigen::VectorXd te = t * e.col(a);
    s += te.dot(g * te);
  }
  return std::sqrt(std::max(s, 0.0));
}

double tensor_norm(const MetricField& g, const Tensor11& t, std::span<const double> p) {
  return tensor_norm(eval_matrix(g, p).real(), eval_matrix(t, p).real());
}

NumericCurvature::NumericCurvature(const MetricField& g)
    : dim_(g.dim()), kernel_([&g] {
        const int n = g.dim();
        std::vector<Expr> out;
        Differentiator d;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            out.push_back(g(i, j));
        for (int a = 0; a < n; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              out.push_back(d(g(i, j), a));
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                out.push_back(d(d(g(i, j), a), b));
        return Kernel(std::move(out));
      }()) {}

NumericCurvature::Jet NumericCurvature::at(std::span<const double> p) const {
  const int n = dim_;
  std::vector<Complex> v(kernel_.size());
  std::vector<Complex> scratch;
  kernel_.evaluate(p, {}, v, scratch);
  auto G = [&](int i, int j) { return v[i * n + j].real(); };
  auto dG = [&](int a, int i, int j) { return v[n * n + (a * n + i) * n + j].real(); };
  auto ddG = [&](int a, int b, int i, int j) {
    return v[n * n + n * n * n + ((a * n + b) * n + i) * n + j].real();
  };
  Jet jet;
  jet.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      jet.g(i, j) = G(i, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jet.g);
  if (!lu.isInvertible())
    throw DomainError("metric is singular at the evaluation point");
  jet.inverse = lu.inverse();

  auto idx3 = [n](int a, int b, int c) { return (static_cast<std::size_t>(a) * n + b) * n + c; };
  // first-kind symbols and their derivatives
  std::vector<double> c1(n * n * n), dc1(n * n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        c1[idx3(l, i, j)] = 0.5 * (dG(i, j, l) + dG(j, i, l) - dG(l, i, j));
        for (int a = 0; a < n; ++a)
          dc1[a * n * n * n + idx3(l, i, j)] =
              0.5 * (ddG(a, i, j, l) + ddG(a, j, i, l) - ddG(a, l, i, j));
      }
  std::vector<Eigen::MatrixXd> dinv(n);
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd dga(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dga(i, j) = dG(a, i, j);
    dinv[a] = -jet.inverse * dga * jet.inverse;
  }
  jet.gamma.assign(n * n * n, 0.0);
  std::vector<double> dgamma(n * n * n * n, 0.0); // [a][k][i][j]
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += jet.inverse(k, l) * c1[idx3(l, i, j)];
        jet.gamma[idx3(k, i, j)] = s;
        for (int a = 0; a < n; ++a) {
          double ds = 0.0;
          for (int l = 0; l < n; ++l)
            ds += dinv[a](k, l) * c1[idx3(l, i, j)] +
                  jet.inverse(k, l) * dc1[a * n * n * n + idx3(l, i, j)];
          dgamma[a * n * n * n + idx3(k, i, j)] = ds;
        }
      }
  jet.curvature.assign(n * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double r = dgamma[i * n * n * n + idx3(l, j, k)] - dgamma[j * n * n * n + idx3(l, i, k)];
          for (int m = 0; m < n; ++m)
            r += jet.gamma[idx3(l, i, m)] * jet.gamma[idx3(m, j, k)] -
                 jet.gamma[idx3(l, j, m)] * jet.gamma[idx3(m, i, k)];
          jet.curvature[((static_cast<std::size_t>(l) * n + i) * n + j) * n + k] = r;
        }
  return jet;
}

} // namespace accr
