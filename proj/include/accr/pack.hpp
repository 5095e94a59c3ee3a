#pragma once

#include <Eigen/Dense>
#include <limits>
#include <span>
#include <vector>

#include "accr/fields.hpp"
#include "accr/kernel.hpp"

namespace accr {

/// Collects the expressions one check needs so they are compiled into a
/// single Kernel; each add() returns the offset of the block it appended.
class Pack {
public:
  std::size_t add(const Expr& e);
  std::size_t add(const std::vector<Expr>& es);
  std::size_t add(const VectorField& v);
  std::size_t add(const Tensor11& t);   // row-major
  std::size_t add(const MetricField& g); // row-major

  std::size_t size() const { return exprs_.size(); }
  Kernel compile() const { return Kernel(exprs_); }

  /// Compile and evaluate at every point with the default execution policy.
  ValueTable evaluate(const PointSet& points) const;

private:
  std::vector<Expr> exprs_;
};

/// Read-only view of one evaluated row.
class Row {
public:
  explicit Row(std::span<const Complex> values) : v_(values) {}

  Complex scalar(std::size_t at) const { return v_[at]; }
  Eigen::VectorXcd vector(std::size_t at, int n) const;
  Eigen::MatrixXcd matrix(std::size_t at, int n) const;

private:
  std::span<const Complex> v_;
};

/// Pointwise evaluation helpers for single points (no kernel).
Eigen::VectorXcd eval_vector(const VectorField& v, std::span<const double> p);
Eigen::MatrixXcd eval_matrix(const Tensor11& t, std::span<const double> p);
Eigen::MatrixXcd eval_matrix(const MetricField& g, std::span<const double> p);

/// Largest complex modulus of the entries (0 for empty input).
/// Non-finite entries count as infinity.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0)
    return 0.0;
  if (!m.allFinite())
    return std::numeric_limits<double>::infinity();
  return m.cwiseAbs().maxCoeff();
}

} // namespace accr
