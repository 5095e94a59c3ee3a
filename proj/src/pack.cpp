#include "accr/pack.hpp"

#include <limits>

namespace accr {

std::size_t Pack::add(const Expr& e) {
  exprs_.push_back(e);
  return exprs_.size() - 1;
}

std::size_t Pack::add(const std::vector<Expr>& es) {
  std::size_t at = exprs_.size();
  exprs_.insert(exprs_.end(), es.begin(), es.end());
  return at;
}

std::size_t Pack::add(const VectorField& v) { return add(v.components()); }

std::size_t Pack::add(const Tensor11& t) {
  std::size_t at = exprs_.size();
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      exprs_.push_back(t(i, j));
  return at;
}

std::size_t Pack::add(const MetricField& g) {
  std::size_t at = exprs_.size();
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      exprs_.push_back(g(i, j));
  return at;
}

ValueTable Pack::evaluate(const PointSet& points) const {
  return accr::evaluate(compile(), points, {}, default_exec());
}

Eigen::VectorXcd Row::vector(std::size_t at, int n) const {
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i)
    out(i) = v_[at + i];
  return out;
}

Eigen::MatrixXcd Row::matrix(std::size_t at, int n) const {
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = v_[at + static_cast<std::size_t>(i) * n + j];
  return out;
}

Eigen::VectorXcd eval_vector(const VectorField& v, std::span<const double> p) {
  Eigen::VectorXcd out(v.dim());
  for (int i = 0; i < v.dim(); ++i)
    out(i) = eval(v[i], p);
  return out;
}

Eigen::MatrixXcd eval_matrix(const Tensor11& t, std::span<const double> p) {
  Eigen::MatrixXcd out(t.dim(), t.dim());
  for (int i = 0; i < t.dim(); ++i)
    for (int j = 0; j < t.dim(); ++j)
      out(i, j) = eval(t(i, j), p);
  return out;
}

Eigen::MatrixXcd eval_matrix(const MetricField& g, std::span<const double> p) {
  Eigen::MatrixXcd out(g.dim(), g.dim());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j)
      out(i, j) = eval(g(i, j), p);
  return out;
}

// Non-finite entries count as infinitely large so they can never pass a tolerance.

} // namespace accr
