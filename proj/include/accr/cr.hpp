#pragma once

#include <span>
#include <vector>

#include "accr/accs.hpp"

namespace accr {

/// Coefficients (a^i, g_{i jbar}) of a structure in CR-chart normal form:
///   eta = dt, xi = d_t + sum (a^i d_{z^i} + conj(a^i) d_{zbar^i}),
///   phi d_t = -i sum (a^i d_{z^i} - conj(a^i) d_{zbar^i}), phi d_{z^i} = i d_{z^i},
/// with g(d_t, d_t) = r and g(d_t, d_{z^i}) = b_i derived below.
struct CRChartData {
  ChartDecl chart;
  std::vector<Expr> a;         // n complex functions
  std::vector<Expr> hermitian; // n x n row-major, entry (i, j) = g_{i jbar}

  int n() const { return chart.n(); }
  const Expr& g(int i, int j) const { return hermitian[static_cast<std::size_t>(i) * n() + j]; }

  /// r = 1 + 2 sum a^i conj(a^j) g_{i jbar}.
  Expr r() const;
  /// b_i = -sum conj(a^j) g_{i jbar}.
  Expr b(int i) const;
};

/// Hermitian symmetry and positivity of g_{i jbar} at the sample points;
/// throws DomainError on failure.
void validate_cr_chart(const CRChartData& data, const Sample& sample, double tol);

/// Real-coordinate structure from CR-chart data. Only the algebraic
/// conditions hold by construction; closedness of Phi is left to the checks.
ChartStructure build_from_cr_chart(const CRChartData& data);

/// a^i = xi^{x_i} + i xi^{y_i}, g_{i jbar} = g(d_{z^i}, d_{zbar^j}).
/// Meaningful for structures already in CR-chart normal form.
CRChartData extract_cr_chart(const ChartStructure& s);

/// g(d_t, d_t) - r, g(d_t, d_{z^i}) - b_i, g(d_{z^i}, d_{z^j}) and the eta = dt,
/// xi, phi normal-form identities for a structure built from `data`.
VerificationReport check_cr_relations(const ChartStructure& s, const CRChartData& data,
                                      const Sample& sample, double tol);

/// Componentwise difference of two structures on the same chart.
VerificationReport compare_structures(const ChartStructure& a, const ChartStructure& b,
                                      const Sample& sample, double tol);

/// Z = X - i phi X for a field with eta(X) = 0.
struct CRSection {
  VectorField x;
  VectorField z;
};

/// Throws DomainError when eta(X) exceeds tol at a sample point, or when
/// phi Z - i Z does.
CRSection dprime_section(const ChartStructure& s, const VectorField& x, const Sample& sample,
                         double tol);

/// Sections from the projections d_c - eta_c xi of every coordinate field;
/// together they span D'.
std::vector<CRSection> dprime_spanning_sections(const ChartStructure& s);

/// The D'' component (1/2)(I + i phi) restricted to ker eta, plus the xi
/// component, of a complex vector field.
std::vector<Expr> outside_dprime(const ChartStructure& s, const VectorField& w);

/// Involutivity of D': the components of [Z_c, Z_d] outside D'.
VerificationReport check_cr_integrability(const ChartStructure& s, const Sample& sample,
                                          double tol);

/// Raised when the bracket and d eta forms of the Levi form disagree.
class LeviInconsistency : public Error {
public:
  using Error::Error;
};

/// The two expressions of the Levi form on a section:
///   bracket: -i eta([Z, Zbar]),  form: -4 d eta(X, phi X).
struct LeviExprs {
  Expr bracket;
  Expr form;
};
LeviExprs levi_exprs(const ChartStructure& s, const CRSection& section);

/// Value at p; throws LeviInconsistency if the two expressions differ by more than 1e-9.
double levi_form(const ChartStructure& s, const CRSection& section, std::span<const double> p);

/// |L| on the spanning sections and their pairwise sums, plus the gap
/// between the two expressions.
VerificationReport check_levi_flat(const ChartStructure& s, const Sample& sample, double tol);

/// Connection on D' extending the Levi-Civita connection:
///   corrected: nabla'_X Z = nabla_X Z - g(X, A Z) xi
///   literal:   nabla'_X Z = nabla_X Z - g(X, A Zbar) xi
/// Only the corrected form removes the xi component of nabla_X Z for Z in D'.
class HermitianConnection {
public:
  enum class Variant { Corrected, Literal };

  explicit HermitianConnection(Analysis& an, Variant variant = Variant::Corrected);

  VectorField operator()(const VectorField& x, const VectorField& z) const;
  /// H(Z, W) = g(Z, conj W).
  Expr hermitian(const VectorField& z, const VectorField& w) const;

private:
  Analysis* an_;
  Variant variant_;
};

/// D'-valuedness of nabla'_X Z and X H(Z1, Z2) = H(nabla'_X Z1, Z2) + H(Z1, nabla'_X Z2)
/// for coordinate X and spanning sections. Throws DomainError when the
/// structure fails the Kahler-leaves condition at `tol`.
struct HermitianReport {
  VerificationReport dprime_valued;
  VerificationReport compatibility;
};
HermitianReport check_hermitian(Analysis& an, const Sample& sample, double tol,
                                HermitianConnection::Variant variant =
                                    HermitianConnection::Variant::Corrected);

} // namespace accr
