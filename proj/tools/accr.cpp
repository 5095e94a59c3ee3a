// Command-line front end: verify, estimate-kmn, deform, list-models, report.
#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>

#include "accr/parser.hpp"
#include "accr/session.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace accr;

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kInputError = 2;

struct Common {
  std::string file;
  std::string model;
  double mu = 0.0;
  int n = 1;
  std::size_t points = 100;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::vector<std::string> checks;
};

void add_common(CLI::App* app, Common& c, bool with_checks) {
  app->add_option("file", c.file, "manifold definition (JSON, schema 1)");
  app->add_option("--model", c.model, "registry model instead of a file (see list-models)");
  app->add_option("--mu", c.mu, "mu parameter of the model");
  app->add_option("--n", c.n, "CR dimension n of the model")->check(CLI::PositiveNumber);
  app->add_option("--points", c.points, "number of seeded sample points");
  app->add_option("--tol", c.tol, "identity residual tolerance");
  app->add_option("--seed", c.seed, "sampling seed");
  app->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  if (with_checks)
    app->add_option("--checks", c.checks, "comma-separated subset of checks")->delimiter(',');
}

RunConfig config(const Common& c) { return RunConfig{c.seed, c.points, c.tol, c.checks}; }

struct Loaded {
  Manifold manifold;
  Json input;
};

Loaded load(const Common& c) {
  if (!c.file.empty() && !c.model.empty())
    throw InputError("", "give either a manifold file or --model, not both");
  if (c.file.empty() && c.model.empty())
    throw InputError("", "a manifold file or --model is required");
  if (!c.file.empty())
    return {load_manifold_file(c.file), Json{{"file", c.file}}};
  ModelSpec spec;
  try {
    spec.realization = realization_from_name(c.model);
  } catch (const DomainError& e) {
    throw InputError("--model", e.what());
  }
  spec.n = c.n;
  spec.mu = c.mu;
  try {
    return {manifold_from_model(spec), Json{{"model", c.model}, {"n", c.n}, {"mu", c.mu}}};
  } catch (const DomainError& e) {
    throw InputError("--model", e.what());
  }
}

int cmd_verify(const Common& c) {
  Loaded in = load(c);
  VerifyResult r = run_verify(in.manifold, config(c));
  if (c.format == "json")
    std::cout << dump(report_json(r, in.input));
  else
    std::cout << to_text(r);
  return r.pass ? kPass : kCheckFailure;
}

int cmd_estimate(const Common& c) {
  Loaded in = load(c);
  EstimateResult r = run_estimate(in.manifold, config(c));
  if (c.format == "json")
    std::cout << dump(report_json(r, in.input));
  else
    std::cout << to_text(r);
  return kPass;
}

int cmd_deform(const Common& c, double alpha, const std::string& beta) {
  Loaded in = load(c);
  Deformation d;
  d.alpha = alpha;
  try {
    d.beta = parse_expression(beta, in.manifold.chart);
  } catch (const ParseError& e) {
    throw InputError("--beta", e.what());
  }
  std::cout << dump(run_deform(in.manifold, d, config(c)));
  return kPass;
}

int cmd_list(const std::string& format) {
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& m : model_registry())
      arr.push_back({{"name", m.name}, {"min_n", m.min_n}, {"uses_mu", m.uses_mu}, {"summary", m.summary}});
    std::cout << dump(arr);
  } else {
    for (const auto& m : model_registry()) {
      std::printf("%-16s n >= %d%s  %s\n", m.name.c_str(), m.min_n, m.uses_mu ? ", mu" : "    ",
                  m.summary.c_str());
    }
  }
  return kPass;
}

// Certifies the registry: each entry runs the default checks and is compared
// with the outcome expected for it.
int cmd_report(const Common& c) {
  struct Row {
    ModelSpec spec;
    std::vector<std::string> expected_failures;
  };
  std::vector<Row> rows;
  for (auto r : {Realization::ModelFrame, Realization::ModelGlobalCr})
    for (int n : {1, 2})
      for (double mu : {0.0, 1.0, -1.0, 1.5, -1.5, 2.0, -2.0, 3.0, -3.0})
        rows.push_back({{r, n, mu}, {}});
  for (int n : {1, 2}) {
    rows.push_back({{Realization::Flat, n, 0.0}, {}});
    rows.push_back({{Realization::ProductKahler, n, 0.0}, {}});
    rows.push_back({{Realization::ControlContact, n, 0.0}, {"almost-cosymplectic", "levi-form", "hermitian"}});
  }
  rows.push_back({{Realization::ControlTwisted, 2, 0.0}, {"kahler-leaves", "cr-integrability", "hermitian"}});

  RunConfig cfg = config(c);
  bool all_ok = true;
  Json out = Json::array();
  for (const auto& row : rows) {
    VerifyResult r = run_verify(manifold_from_model(row.spec), cfg);
    std::vector<std::string> failed;
    for (const auto& ck : r.checks)
      if (!ck.pass)
        failed.push_back(ck.name);
    std::vector<std::string> expected;
    for (const auto& name : row.expected_failures)
      if (cfg.checks.empty() || std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end())
        expected.push_back(name);
    bool ok = failed == expected;
    all_ok = all_ok && ok;
    std::string name = realization_name(row.spec.realization);
    if (c.format == "json") {
      out.push_back({{"model", name}, {"n", row.spec.n}, {"mu", row.spec.mu}, {"failed", failed},
                     {"expected_failures", expected}, {"as_expected", ok}});
    } else {
      std::string f;
      for (const auto& s : failed)
        f += (f.empty() ? "" : ",") + s;
      std::printf("%-4s %-16s n=%d mu=%5.2f  failed: %s\n", ok ? "OK" : "BAD", name.c_str(),
                  row.spec.n, row.spec.mu, f.empty() ? "none" : f.c_str());
    }
  }
  if (c.format == "json")
    std::cout << dump(Json{{"command", "report"},
                           {"config", {{"seed", cfg.seed}, {"points", cfg.points}, {"tolerance", cfg.tol}}},
                           {"models", out},
                           {"pass", all_ok}});
  else
    std::printf("%s\n", all_ok ? "registry certified" : "registry has unexpected outcomes");
  return all_ok ? kPass : kCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for almost cosymplectic CR structures"};
  app.require_subcommand(1);

  Common verify_opts, estimate_opts, deform_opts, report_opts;
  std::string list_format = "text";
  double alpha = 1.0;
  std::string beta = "1";

  auto* verify = app.add_subcommand("verify", "run identity checks on a structure");
  add_common(verify, verify_opts, true);
  auto* estimate = app.add_subcommand("estimate-kmn", "fit (kappa, mu, nu) at each sample point");
  add_common(estimate, estimate_opts, false);
  auto* deform = app.add_subcommand("deform", "apply a D-conformal deformation, print the new manifold");
  add_common(deform, deform_opts, false);
  deform->add_option("--alpha", alpha, "positive constant alpha");
  deform->add_option("--beta", beta, "positive function beta with d beta ^ eta = 0");
  auto* list = app.add_subcommand("list-models", "show the model registry");
  list->add_option("--format", list_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  auto* report = app.add_subcommand("report", "certify every registry model");
  add_common(report, report_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (verify->parsed())
      return cmd_verify(verify_opts);
    if (estimate->parsed())
      return cmd_estimate(estimate_opts);
    if (deform->parsed())
      return cmd_deform(deform_opts, alpha, beta);
    if (list->parsed())
      return cmd_list(list_format);
    if (report->parsed())
      return cmd_report(report_opts);
  } catch (const DeformationRejected& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.report().name.empty())
      std::cerr << dump(report_json(e.report()));
    return kCheckFailure;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
