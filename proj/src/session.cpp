#include "accr/session.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "accr/cr.hpp"

namespace accr {
namespace {

using Json = nlohmann::ordered_json;

// JSON has no infinities; non-finite residuals are written as strings.
Json num(double v) {
  if (std::isfinite(v))
    return v;
  if (std::isnan(v))
    return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

bool selected(const RunConfig& cfg, const std::string& name) {
  return cfg.checks.empty() ||
         std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
}

CheckRecord single(VerificationReport r) {
  CheckRecord c;
  c.name = r.name;
  c.pass = r.pass;
  c.reports.push_back(std::move(r));
  return c;
}

} // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "acm-axioms", "almost-cosymplectic", "kahler-leaves", "cr-integrability", "levi-form",
      "cosymplectic", "kmn", "kmn-relations", "hermitian"};
  return names;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.points < 1)
    throw InputError("--points", "must be at least 1");
  if (!(cfg.tol > 0) || !std::isfinite(cfg.tol))
    throw InputError("--tol", "must be a positive number");
  for (const auto& c : cfg.checks)
    if (std::find(check_names().begin(), check_names().end(), c) == check_names().end())
      throw InputError("--checks", "unknown check '" + c + "'");
}

Prepared prepare(const Manifold& m, const Sample& sample, double tol) {
  Prepared out{m.structure, m.kmn};
  if (m.deformation) {
    out.structure = d_conformal_deform(m.structure, *m.deformation, sample, tol);
    if (out.kmn)
      out.kmn = deform_kmn(*out.kmn, *m.deformation, m.structure.xi);
  }
  try {
    require_positive_definite(out.structure.g, sample.points);
  } catch (const DomainError& e) {
    throw InputError("structure.g", e.what());
  }
  return out;
}

VerifyResult run_verify(const Manifold& m, const RunConfig& cfg) {
  validate_config(cfg);
  Sample sample = Sample::draw(m.chart, cfg.seed, cfg.points);
  Prepared prep = prepare(m, sample, cfg.tol);
  const ChartStructure& s = prep.structure;
  Analysis an(s);
  const double tol = cfg.tol;

  VerifyResult res;
  res.config = cfg;
  for (const auto& name : check_names()) {
    if (!selected(cfg, name))
      continue;
    CheckRecord rec;
    if (name == "acm-axioms") {
      rec = single(check_acm_axioms(s, sample, tol));
    } else if (name == "almost-cosymplectic") {
      rec = single(check_almost_cosymplectic(an, sample, tol));
    } else if (name == "kahler-leaves") {
      rec = single(check_kahler_leaves(an, sample, tol));
    } else if (name == "cr-integrability") {
      rec = single(check_cr_integrability(s, sample, tol));
    } else if (name == "levi-form") {
      rec = single(check_levi_flat(s, sample, tol));
    } else if (name == "cosymplectic") {
      CosymplecticReport c = check_cosymplectic(an, sample, tol);
      rec.name = name;
      rec.reports = {c.normal, c.nabla_phi, c.goldberg_yano};
      // The three criteria are only equivalent on almost cosymplectic structures.
      if (!check_almost_cosymplectic(an, sample, tol).pass) {
        rec.pass = true;
        rec.verdict = "not cosymplectic";
        rec.note = "not almost cosymplectic; agreement of the criteria is not required";
      } else {
        rec.pass = c.coherent();
        rec.verdict = !c.coherent() ? "incoherent" : c.cosymplectic() ? "cosymplectic" : "not cosymplectic";
      }
    } else if (name == "kmn" || name == "kmn-relations") {
      rec.name = name;
      if (!prep.kmn) {
        rec.pass = true;
        rec.skipped = true;
        rec.note = "no (kappa, mu, nu) supplied";
      } else {
        const KMNTriple& k = *prep.kmn;
        rec = single(name == "kmn" ? check_kmn(an, k.kappa, k.mu, k.nu, sample, tol)
                                   : check_kmn_relations(an, k.kappa, k.mu, k.nu, sample, tol));
      }
    } else if (name == "hermitian") {
      rec.name = name;
      try {
        HermitianReport h = check_hermitian(an, sample, tol);
        rec.pass = h.dprime_valued.pass && h.compatibility.pass;
        rec.reports = {h.dprime_valued, h.compatibility};
      } catch (const DomainError& e) {
        rec.pass = false;
        rec.note = e.what();
      }
    }
    res.pass = res.pass && rec.pass;
    res.checks.push_back(std::move(rec));
  }
  return res;
}

EstimateResult run_estimate(const Manifold& m, const RunConfig& cfg) {
  validate_config(cfg);
  Sample sample = Sample::draw(m.chart, cfg.seed, cfg.points);
  Prepared prep = prepare(m, sample, cfg.tol);
  Analysis an(prep.structure);
  KMNEstimator est(an);
  EstimateResult out;
  out.config = cfg;
  for (std::size_t k = 0; k < sample.points.size(); ++k) {
    auto p = sample.points[k];
    out.points.emplace_back(p.begin(), p.end());
    out.fits.push_back(est.at(p));
  }
  return out;
}

Json run_deform(const Manifold& m, const Deformation& d, const RunConfig& cfg) {
  validate_config(cfg);
  Sample sample = Sample::draw(m.chart, cfg.seed, cfg.points);
  Prepared prep = prepare(m, sample, cfg.tol);
  ChartStructure out = d_conformal_deform(prep.structure, d, sample, cfg.tol);
  std::optional<KMNTriple> kmn;
  if (prep.kmn)
    kmn = deform_kmn(*prep.kmn, d, prep.structure.xi);
  return structure_document(out, kmn);
}

Json report_json(const VerificationReport& r) {
  Json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["points"] = r.points;
  j["seed"] = r.seed;
  j["tolerance"] = num(r.tolerance);
  j["max_residual"] = num(r.max_residual);
  j["mean_residual"] = num(r.mean_residual);
  Json fam = Json::array();
  for (const auto& f : r.families)
    fam.push_back({{"name", f.name}, {"max", num(f.max)}, {"mean", num(f.mean)}});
  j["families"] = fam;
  return j;
}

Json report_json(const VerifyResult& r, const Json& input) {
  Json j;
  j["command"] = "verify";
  j["input"] = input;
  j["config"] = {{"seed", r.config.seed}, {"points", r.config.points}, {"tolerance", num(r.config.tol)}};
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json cj;
    cj["check"] = c.name;
    cj["pass"] = c.pass;
    if (c.skipped)
      cj["skipped"] = true;
    if (!c.verdict.empty())
      cj["verdict"] = c.verdict;
    if (!c.note.empty())
      cj["note"] = c.note;
    Json reps = Json::array();
    for (const auto& rep : c.reports)
      reps.push_back(report_json(rep));
    cj["reports"] = reps;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["pass"] = r.pass;
  return j;
}

Json report_json(const EstimateResult& r, const Json& input) {
  static const char* names[] = {"kappa", "mu", "nu"};
  Json j;
  j["command"] = "estimate-kmn";
  j["input"] = input;
  j["config"] = {{"seed", r.config.seed}, {"points", r.config.points}, {"tolerance", num(r.config.tol)}};
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.fits.size(); ++k) {
    const KMNFit& f = r.fits[k];
    Json row;
    row["point"] = r.points[k];
    for (int c = 0; c < 3; ++c)
      row[names[c]] = f.determined[c] ? num(f.value[c]) : Json("underdetermined");
    row["residual"] = num(f.residual);
    rows.push_back(row);
  }
  j["fits"] = rows;
  return j;
}

std::string to_text(const VerifyResult& r) {
  std::ostringstream os;
  os << "seed " << r.config.seed << ", " << r.config.points << " points, tolerance "
     << fmt(r.config.tol) << "\n";
  for (const auto& c : r.checks) {
    os << (c.skipped ? "SKIP" : c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.verdict.empty())
      os << "  (" << c.verdict << ")";
    os << "\n";
    if (!c.note.empty())
      os << "      " << c.note << "\n";
    for (const auto& rep : c.reports) {
      os << "      " << rep.name << ": max " << fmt(rep.max_residual) << ", mean "
         << fmt(rep.mean_residual) << (rep.pass ? "" : "  [exceeds tolerance]") << "\n";
      if (!rep.pass)
        for (const auto& f : rep.families)
          os << "        " << f.name << ": max " << fmt(f.max) << "\n";
    }
  }
  os << (r.pass ? "all selected checks passed" : "some checks failed") << "\n";
  return os.str();
}

std::string to_text(const EstimateResult& r) {
  std::ostringstream os;
  os << "seed " << r.config.seed << ", " << r.config.points << " points\n";
  for (std::size_t k = 0; k < r.fits.size(); ++k) {
    const KMNFit& f = r.fits[k];
    os << "point " << k << ":";
    static const char* names[] = {"kappa", "mu", "nu"};
    for (int c = 0; c < 3; ++c) {
      os << "  " << names[c] << " = ";
      if (f.determined[c]) {
        char buf[32];
        double v = std::abs(f.value[c]) < 5e-11 ? 0.0 : f.value[c];
        std::snprintf(buf, sizeof buf, "%.10f", v);
        os << buf;
      } else {
        os << "underdetermined";
      }
    }
    os << "  residual " << fmt(f.residual) << "\n";
  }
  return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace accr
