#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "accr/io.hpp"

namespace accr {

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t points = 100;
  double tol = 1e-8;
  std::vector<std::string> checks; // empty: the default selection
};

/// Names accepted by RunConfig::checks, in default execution order.
const std::vector<std::string>& check_names();

/// Throws InputError on an unknown name, a zero point count or a
/// non-positive tolerance.
void validate_config(const RunConfig& cfg);

struct CheckRecord {
  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string note;
  std::string verdict; // cosymplectic: "cosymplectic", "not cosymplectic" or "incoherent"
  std::vector<VerificationReport> reports;
};

struct VerifyResult {
  RunConfig config;
  std::vector<CheckRecord> checks;
  bool pass = true;
};

/// Structure with the manifold's deformation applied (validated on `sample`),
/// and its (kappa, mu, nu) if known.
struct Prepared {
  ChartStructure structure;
  std::optional<KMNTriple> kmn;
};
Prepared prepare(const Manifold& m, const Sample& sample, double tol);

/// Runs the selected checks. Throws InputError for bad configuration or a
/// metric that is not positive definite on the sample; DeformationRejected
/// when the manifold's deformation is inadmissible.
VerifyResult run_verify(const Manifold& m, const RunConfig& cfg);

struct EstimateResult {
  RunConfig config;
  std::vector<std::vector<double>> points;
  std::vector<KMNFit> fits;
};
EstimateResult run_estimate(const Manifold& m, const RunConfig& cfg);

/// Deformed structure as a manifold document; throws DeformationRejected.
nlohmann::ordered_json run_deform(const Manifold& m, const Deformation& d, const RunConfig& cfg);

/// Report rendering. `input` describes what was checked and is copied verbatim.
nlohmann::ordered_json report_json(const VerifyResult& r, const nlohmann::ordered_json& input);
nlohmann::ordered_json report_json(const EstimateResult& r, const nlohmann::ordered_json& input);
nlohmann::ordered_json report_json(const VerificationReport& r);
std::string to_text(const VerifyResult& r);
std::string to_text(const EstimateResult& r);

/// Stable serialization used for every JSON report (two-space indent, newline).
std::string dump(const nlohmann::ordered_json& j);

} // namespace accr
