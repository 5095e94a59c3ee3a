#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "accr/fields.hpp"
#include "accr/kernel.hpp"

namespace accr {

/// Largest dimension handled by symbolic inversion (n <= 3).
inline constexpr int kMaxSymbolicDim = 7;

/// Levi-Civita connection of a metric; Gamma(k, i, j) = Gamma^k_{ij}.
class ConnectionData {
public:
  ConnectionData(MetricField metric, std::vector<Expr> inverse, std::vector<Expr> gamma);

  int dim() const { return metric_.dim(); }
  const MetricField& metric() const { return metric_; }
  const Expr& inverse(int i, int j) const { return inverse_[i * dim() + j]; }
  const Expr& operator()(int k, int i, int j) const {
    return gamma_[(static_cast<std::size_t>(k) * dim() + i) * dim() + j];
  }
  const std::vector<Expr>& symbols() const { return gamma_; }

private:
  MetricField metric_;
  std::vector<Expr> inverse_;
  std::vector<Expr> gamma_;
};

/// R(d_i, d_j) d_k = R^l_{ijk} d_l. Only i < j is stored; the accessor
/// applies antisymmetry.
class CurvatureData {
public:
  CurvatureData(int dim, std::vector<Expr> lower_pairs);

  int dim() const { return dim_; }
  Expr operator()(int l, int i, int j, int k) const;

  /// Components for i < j in the order (i, j) lexicographic, then row l,
  /// column k: block (i, j) is the matrix of R(d_i, d_j).
  const std::vector<Expr>& blocks() const { return c_; }
  std::size_t block_offset(int i, int j) const; // requires i < j

private:
  int dim_;
  std::vector<Expr> c_;
};

/// Symbolic contravariant metric. Uses the metric's known inverse when one
/// was supplied, otherwise the adjugate formula (dim <= kMaxSymbolicDim).
std::vector<Expr> inverse_metric(const MetricField& g);

/// Adjugate/determinant inversion, regardless of any known inverse.
std::vector<Expr> adjugate_inverse(const MetricField& g);

/// Symbolic determinant by memoized Laplace expansion.
Expr determinant(const MetricField& g);

/// Throws DomainError naming the first point where g is singular or not
/// positive definite.
void require_positive_definite(const MetricField& g, const PointSet& points);

/// Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}).
ConnectionData christoffel(const MetricField& g);

/// R^l_{ijk} = d_i G^l_{jk} - d_j G^l_{ik} + G^l_{im} G^m_{jk} - G^l_{jm} G^m_{ik}.
CurvatureData curvature(const ConnectionData& conn);

/// (nabla_X Y)^k = X^i (d_i Y^k + Gamma^k_{ij} Y^j); complex-linear in Y.
VectorField covariant_derivative(const ConnectionData& conn, const VectorField& x,
                                 const VectorField& y);

/// (nabla_X T) Y = nabla_X (T Y) - T (nabla_X Y).
Tensor11 covariant_derivative(const ConnectionData& conn, const VectorField& x,
                              const Tensor11& t);

/// Matrix of R(X, Y) at a point from evaluated blocks; `blocks` holds
/// CurvatureData::blocks() evaluated at that point.
Eigen::MatrixXcd curvature_operator(int dim, std::span<const Complex> blocks,
                                    const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

/// R(X, Y) Z evaluated at p.
Eigen::VectorXcd curvature_apply(const CurvatureData& curv, const VectorField& x,
                                 const VectorField& y, const VectorField& z,
                                 std::span<const double> p);

/// g-orthonormal basis from Gram-Schmidt on the coordinate basis taken in
/// `order` (t first by default). Columns of the result are the basis vectors.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& g, std::vector<int> order = {});

/// sqrt(sum_a g(T e_a, T e_a)) over a g-orthonormal basis.
double tensor_norm(const Eigen::MatrixXd& g, const Eigen::MatrixXd& t);
double tensor_norm(const MetricField& g, const Tensor11& t, std::span<const double> p);

/// Curvature without symbolic inversion: metric jets (g, dg, ddg) are
/// evaluated at a point and Gamma, dGamma, R are formed with linear solves.
/// Works for any dimension; this is the route for dim > kMaxSymbolicDim.
class NumericCurvature {
public:
  explicit NumericCurvature(const MetricField& g);

  struct Jet {
    Eigen::MatrixXd g;
    Eigen::MatrixXd inverse;
    std::vector<double> gamma;     // [k][i][j]
    std::vector<double> curvature; // [l][i][j][k]
  };

  Jet at(std::span<const double> p) const;
  int dim() const { return dim_; }

private:
  int dim_;
  Kernel kernel_; // g_ij, d_a g_ij, d_a d_b g_ij
};

} // namespace accr
