#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "accr/chart.hpp"
#include "accr/fields.hpp"
#include "accr/kernel.hpp"
#include "accr/riemann.hpp"

namespace accr {

/// Almost contact metric structure (phi, xi, eta, g) on a coordinate chart.
struct ChartStructure {
  ChartDecl chart;
  Tensor11 phi;
  VectorField xi;
  KForm eta;
  MetricField g;

  int dim() const { return chart.dim(); }
};

/// Seeded evaluation sites.
struct Sample {
  std::uint64_t seed = 0;
  PointSet points;

  static Sample draw(const ChartDecl& chart, std::uint64_t seed, std::size_t count);
};

/// Statistics of one residual family: per point the largest complex modulus
/// over the family's components, then max and mean over the points.
struct ResidualStats {
  std::string name;
  double max = 0.0;
  double mean = 0.0;
};

struct VerificationReport {
  std::string name;
  std::size_t points = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false; // max_residual <= tolerance
  std::uint64_t seed = 0;
  std::vector<ResidualStats> families;
};

/// Named lists of expressions that vanish when an identity holds.
class ResidualSet {
public:
  void add(std::string family, std::vector<Expr> components);
  void add(std::string family, const VectorField& v) { add(std::move(family), v.components()); }
  void add(std::string family, const Tensor11& t);

  /// One kernel for all families, evaluated over the sample.
  VerificationReport evaluate(std::string name, const Sample& sample, double tol) const;

private:
  std::vector<std::string> names_;
  std::vector<std::vector<Expr>> families_;
};

/// Lazily derived geometric data of a structure. Not thread-safe; build the
/// pieces once and share the immutable results.
class Analysis {
public:
  explicit Analysis(ChartStructure s);

  const ChartStructure& structure() const { return s_; }
  int dim() const { return s_.dim(); }

  const ConnectionData& connection();
  const CurvatureData& curvature();
  /// A X = -nabla_X xi.
  const Tensor11& tensor_A();
  /// h = 1/2 L_xi phi.
  const Tensor11& tensor_h();
  /// Phi(X, Y) = g(phi X, Y), taken antisymmetric in X and Y.
  const KForm& fundamental_form();

  /// phi^2 X, i.e. the tensor phi o phi.
  Tensor11 phi_squared() const { return s_.phi * s_.phi; }
  Tensor11 eta_xi() const { return Tensor11::outer(s_.xi, s_.eta); }

private:
  ChartStructure s_;
  std::optional<ConnectionData> conn_;
  std::optional<CurvatureData> curv_;
  std::optional<Tensor11> a_;
  std::optional<Tensor11> h_;
  std::optional<KForm> phi_form_;
};

KForm fundamental_form(const ChartStructure& s);

/// N_phi(d_a, d_b) for coordinate fields.
VectorField nijenhuis(const ChartStructure& s, int a, int b);
/// N_phi(X, Y) for arbitrary fields.
VectorField nijenhuis(const ChartStructure& s, const VectorField& x, const VectorField& y);

Tensor11 tensor_A(Analysis& an);
Tensor11 tensor_h(Analysis& an);

VerificationReport check_acm_axioms(const ChartStructure& s, const Sample& sample, double tol);
VerificationReport check_almost_cosymplectic(Analysis& an, const Sample& sample, double tol);
VerificationReport check_normal(const ChartStructure& s, const Sample& sample, double tol);
VerificationReport check_nabla_phi(Analysis& an, const Sample& sample, double tol);
VerificationReport check_goldberg_yano(Analysis& an, const Sample& sample, double tol);
VerificationReport check_kahler_leaves(Analysis& an, const Sample& sample, double tol);

/// The three cosymplectic criteria side by side.
struct CosymplecticReport {
  VerificationReport normal;
  VerificationReport nabla_phi;
  VerificationReport goldberg_yano;
  /// All three verdicts equal.
  bool coherent() const;
  /// True when all three pass.
  bool cosymplectic() const;
};
CosymplecticReport check_cosymplectic(Analysis& an, const Sample& sample, double tol);

/// Nullity condition R(X,Y)xi = eta(Y) P X - eta(X) P Y, P = k Id + m h + v A,
/// together with dk ^ eta = dm ^ eta = dv ^ eta = 0.
VerificationReport check_kmn(Analysis& an, const Expr& kappa, const Expr& mu, const Expr& nu,
                             const Sample& sample, double tol);

/// A^2 = -k (Id - eta (x) xi), nabla_xi A = m h + v A, dk(xi) = 2 v k.
VerificationReport check_kmn_relations(Analysis& an, const Expr& kappa, const Expr& mu,
                                       const Expr& nu, const Sample& sample, double tol);

/// Pointwise least-squares fit of (kappa, mu, nu).
struct KMNFit {
  std::array<double, 3> value{};          // minimal-norm solution
  std::array<bool, 3> determined{};       // false: value is not meaningful
  double residual = 0.0;
  bool underdetermined() const { return !(determined[0] && determined[1] && determined[2]); }
};

/// Evaluates the data the fit needs at a point; reusable across points.
class KMNEstimator {
public:
  explicit KMNEstimator(Analysis& an);

  /// `order` is the Gram-Schmidt input order of coordinate indices whose
  /// projections onto ker eta are orthonormalized; empty means x, y, then t.
  KMNFit at(std::span<const double> p, const std::vector<int>& order = {}) const;

private:
  int dim_;
  Kernel kernel_; // g, eta, xi, h, A, curvature blocks
};

KMNFit estimate_kmn(Analysis& an, std::span<const double> p, const std::vector<int>& order = {});

/// phi' = phi, xi' = xi / beta, eta' = beta eta, g' = alpha g + (beta^2 - alpha) eta (x) eta.
struct Deformation {
  double alpha = 1.0;
  Expr beta = 1.0;
};

class DeformationRejected : public Error {
public:
  DeformationRejected(const std::string& what, VerificationReport report)
      : Error(what), report_(std::move(report)) {}
  const VerificationReport& report() const { return report_; }

private:
  VerificationReport report_;
};

/// Residual of d beta ^ eta.
VerificationReport check_deformation_admissible(const ChartStructure& s, const Deformation& d,
                                                const Sample& sample, double tol);

/// Throws DeformationRejected when alpha <= 0 or d beta ^ eta does not vanish.
ChartStructure d_conformal_deform(const ChartStructure& s, const Deformation& d,
                                  const Sample& sample, double tol);

/// Deformation data without the admissibility test.
ChartStructure d_conformal_deform_unchecked(const ChartStructure& s, const Deformation& d);

/// Parameters that undo `d`.
Deformation inverse_deformation(const Deformation& d);

/// p = |L_xi h| - 2 |h|^2 (first term as written, not squared). The squared
/// reading is kept alongside for diagnostics.
struct PerroneValue {
  double p = 0.0;
  double p_squared_reading = 0.0;
  double norm_lie_h = 0.0;
  double norm_h = 0.0;
};

class PerroneEvaluator {
public:
  explicit PerroneEvaluator(Analysis& an); // requires dimension 3
  PerroneValue at(std::span<const double> p) const;

private:
  int dim_;
  Kernel kernel_; // g, h, L_xi h
};

PerroneValue perrone_p(Analysis& an, std::span<const double> p);

} // namespace accr
