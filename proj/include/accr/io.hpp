#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "accr/accs.hpp"
#include "accr/models.hpp"

namespace accr {

/// Malformed manifold file: bad JSON, schema violation, or an expression
/// that fails to parse. `where` is a JSON path such as structure.explicit.g[1][2].
class InputError : public Error {
public:
  InputError(const std::string& where, const std::string& message)
      : Error(where.empty() ? message : where + ": " + message), where_(where) {}
  const std::string& where() const { return where_; }

private:
  std::string where_;
};

enum class SourceKind { Model, Explicit, CrChart };

/// A loaded manifold definition. Parameters are bound to constants at load,
/// so every expression below is parameter-free.
struct Manifold {
  ChartDecl chart;
  ParamMap parameters;
  SourceKind source = SourceKind::Explicit;
  std::optional<ModelSpec> model;
  std::optional<Model> built_model; // source == Model
  std::optional<CRChartData> cr;    // source == CrChart
  ChartStructure structure; // as given, before any deformation
  /// Describes `structure` itself; a deformation transforms it by deform_kmn.
  std::optional<KMNTriple> kmn;
  /// Applied by the run functions after validation against the sample.
  std::optional<Deformation> deformation;
};

/// Parse a manifold file (schema 1). Throws InputError or ParseError.
Manifold load_manifold(const nlohmann::ordered_json& doc);
Manifold load_manifold_text(const std::string& text);
Manifold load_manifold_file(const std::string& path);

/// Manifold for a registry model on the standard chart.
Manifold manifold_from_model(const ModelSpec& spec);

/// Explicit-form document of a structure (with optional kmn), suitable for
/// load_manifold.
nlohmann::ordered_json structure_document(const ChartStructure& s,
                                          const std::optional<KMNTriple>& kmn);

/// (kappa', mu', nu') of the deformed structure:
/// kappa / beta^2, mu / beta, (nu beta - d beta(xi)) / beta^2.
KMNTriple deform_kmn(const KMNTriple& k, const Deformation& d, const VectorField& xi);

} // namespace accr
