#pragma once

#include <optional>
#include <vector>

#include "accr/chart.hpp"
#include "accr/expr.hpp"

namespace accr {

/// Vector field in the coordinate frame; components may be complex-valued.
class VectorField {
public:
  explicit VectorField(std::vector<Expr> components);
  static VectorField zero(int dim);
  /// The coordinate field d/dx^k.
  static VectorField coordinate(int dim, int k);

  int dim() const { return static_cast<int>(c_.size()); }
  const Expr& operator[](int k) const { return c_[k]; }
  const std::vector<Expr>& components() const { return c_; }

  /// X(f) = X^j d_j f.
  Expr apply(const Expr& f) const;

  friend VectorField operator+(const VectorField& a, const VectorField& b);
  friend VectorField operator-(const VectorField& a, const VectorField& b);
  friend VectorField operator*(const Expr& f, const VectorField& a);

private:
  std::vector<Expr> c_;
};

VectorField conj(const VectorField& v);

/// Antisymmetric covariant k-tensor, k in {1, 2, 3}.
///
/// Storage is dense, but the only mutator writes every permutation of the
/// index tuple with its sign, so antisymmetry holds by construction.
class KForm {
public:
  KForm(int degree, int dim);

  int degree() const { return degree_; }
  int dim() const { return dim_; }

  const Expr& operator()(int i) const;
  const Expr& operator()(int i, int j) const;
  const Expr& operator()(int i, int j, int k) const;

  void set(int i, const Expr& v);
  void set(int i, int j, const Expr& v);
  void set(int i, int j, int k, const Expr& v);

  /// Components with strictly increasing index tuples.
  std::vector<Expr> independent_components() const;

  /// Evaluate the form on vector fields (one per slot).
  Expr on(const std::vector<VectorField>& fields) const;

private:
  std::size_t offset(std::initializer_list<int> idx) const;
  int degree_;
  int dim_;
  std::vector<Expr> c_;
};

/// (1,1)-tensor; entry (i, j) is the i-th component of T(d/dx^j).
class Tensor11 {
public:
  explicit Tensor11(int dim);
  static Tensor11 identity(int dim);
  /// X (x) alpha, i.e. Y -> alpha(Y) X.
  static Tensor11 outer(const VectorField& x, const KForm& alpha);

  int dim() const { return dim_; }
  const Expr& operator()(int i, int j) const { return c_[i * dim_ + j]; }
  Expr& operator()(int i, int j) { return c_[i * dim_ + j]; }

  VectorField apply(const VectorField& x) const;
  /// Column j, i.e. T(d/dx^j).
  VectorField column(int j) const;

  friend Tensor11 operator+(const Tensor11& a, const Tensor11& b);
  friend Tensor11 operator-(const Tensor11& a, const Tensor11& b);
  friend Tensor11 operator*(const Expr& f, const Tensor11& a);
  /// Composition (a o b)(X) = a(b(X)).
  friend Tensor11 operator*(const Tensor11& a, const Tensor11& b);

private:
  int dim_;
  std::vector<Expr> c_;
};

/// Symmetric covariant 2-tensor. Positivity is checked at sample points
/// by the consumers, never assumed.
class MetricField {
public:
  explicit MetricField(int dim);
  static MetricField identity(int dim);

  int dim() const { return dim_; }
  const Expr& operator()(int i, int j) const { return c_[i * dim_ + j]; }
  void set(int i, int j, const Expr& v);

  Expr operator()(const VectorField& x, const VectorField& y) const;
  /// The 1-form g(X, .).
  KForm lower(const VectorField& x) const;

  /// Contravariant inverse supplied by the constructor of the metric (e.g. from
  /// an orthonormal frame); consumers fall back to symbolic inversion without it.
  const std::optional<std::vector<Expr>>& known_inverse() const { return inverse_; }
  void set_known_inverse(std::vector<Expr> inverse);

private:
  int dim_;
  std::vector<Expr> c_;
  std::optional<std::vector<Expr>> inverse_;
};

/// [X, Y]^k = X^j d_j Y^k - Y^j d_j X^k.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Exterior derivative with the normalization
///   d eta(X, Y) = 1/2 (X eta(Y) - Y eta(X) - eta([X, Y]))
/// and, for 2-forms, the matching 1/3 factor. Defined for degree 1 and 2.
KForm exterior_derivative(const KForm& form);

/// df as a 1-form.
KForm differential(const Expr& f, int dim);

/// (a ^ b)_{ij} = 1/2 (a_i b_j - a_j b_i), the same normalization as d.
KForm wedge(const KForm& a, const KForm& b);

/// (L_X T)(Y) = [X, T Y] - T [X, Y].
Tensor11 lie_derivative(const VectorField& x, const Tensor11& t);

/// Frame Z_0 = d/dt, Z_i = 1/2 (d/dx^i - i d/dy^i), Z_{i bar} = conj(Z_i),
/// in that order (length 2n + 1).
std::vector<VectorField> complexify_frame(const ChartDecl& chart);

/// 1-form with the given components.
KForm one_form(std::vector<Expr> components);

} // namespace accr
