#include "accr/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "accr/parser.hpp"

namespace accr {
namespace {

using Json = nlohmann::ordered_json;

void require_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw InputError(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key))
      throw InputError(where, "unknown field '" + key + "'");
}

const Json& member(const Json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw InputError(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& v, const std::string& where) {
  if (!v.is_number())
    throw InputError(where, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d))
    throw InputError(where, "expected a finite number");
  return d;
}

class ExprReader {
public:
  ExprReader(const ChartDecl& chart, const ParamMap& params) : chart_(chart), params_(params) {
    for (const auto& [name, value] : params)
      names_.push_back(name);
  }

  Expr operator()(const Json& v, const std::string& where) const {
    if (v.is_number())
      return Expr(number(v, where));
    if (!v.is_string())
      throw InputError(where, "expected an expression string or a number");
    try {
      return bind_params(parse_expression(v.get<std::string>(), chart_, names_), params_);
    } catch (const ParseError& e) {
      throw InputError(where, e.what());
    }
  }

  std::vector<Expr> vector(const Json& v, const std::string& where, int size) const {
    if (!v.is_array() || static_cast<int>(v.size()) != size)
      throw InputError(where, "expected an array of " + std::to_string(size) + " entries");
    std::vector<Expr> out;
    for (int k = 0; k < size; ++k)
      out.push_back((*this)(v[k], where + "[" + std::to_string(k) + "]"));
    return out;
  }

  std::vector<Expr> matrix(const Json& v, const std::string& where, int size) const {
    if (!v.is_array() || static_cast<int>(v.size()) != size)
      throw InputError(where, "expected " + std::to_string(size) + " rows");
    std::vector<Expr> out;
    for (int i = 0; i < size; ++i) {
      auto row = vector(v[i], where + "[" + std::to_string(i) + "]", size);
      out.insert(out.end(), row.begin(), row.end());
    }
    return out;
  }

private:
  const ChartDecl& chart_;
  const ParamMap& params_;
  std::vector<std::string> names_;
};

ChartDecl read_chart(const Json& doc) {
  const Json& c = member(doc, "", "chart");
  require_keys(c, "chart", {"n", "coordinates", "box"});
  const Json& nj = member(c, "chart", "n");
  if (!nj.is_number_integer() || nj.get<long long>() < 1 || nj.get<long long>() > 16)
    throw InputError("chart.n", "expected an integer between 1 and 16");
  int n = nj.get<int>();
  ChartDecl standard = ChartDecl::standard(n);
  std::vector<std::string> names = standard.names();
  std::vector<Interval> box = standard.box();
  if (auto it = c.find("coordinates"); it != c.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != 2 * n + 1)
      throw InputError("chart.coordinates", "expected " + std::to_string(2 * n + 1) + " names");
    for (int k = 0; k < 2 * n + 1; ++k) {
      if (!(*it)[k].is_string())
        throw InputError("chart.coordinates[" + std::to_string(k) + "]", "expected a name");
      names[k] = (*it)[k].get<std::string>();
    }
  }
  if (auto it = c.find("box"); it != c.end()) {
    if (!it->is_array() || static_cast<int>(it->size()) != 2 * n + 1)
      throw InputError("chart.box", "expected " + std::to_string(2 * n + 1) + " [lo, hi] pairs");
    for (int k = 0; k < 2 * n + 1; ++k) {
      std::string where = "chart.box[" + std::to_string(k) + "]";
      const Json& pair = (*it)[k];
      if (!pair.is_array() || pair.size() != 2)
        throw InputError(where, "expected [lo, hi]");
      box[k] = Interval{number(pair[0], where), number(pair[1], where)};
    }
  }
  try {
    return ChartDecl(n, names, box);
  } catch (const Error& e) {
    throw InputError("chart", e.what());
  }
}

void check_symmetric(const std::vector<Expr>& g, int dim, const ChartDecl& chart) {
  PointSet pts = sample_points(chart, 0, 8);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (std::size_t p = 0; p < pts.size(); ++p) {
        Complex a = eval(g[i * dim + j], pts[p]);
        Complex b = eval(g[j * dim + i], pts[p]);
        if (!(std::abs(a - b) <= 1e-12 * (1 + std::abs(a))))
          throw InputError("structure.explicit.g[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                           "metric is not symmetric");
      }
}

std::string show(const Expr& e, const ChartDecl& chart) { return to_string(e, chart.names()); }

} // namespace

Manifold load_manifold(const Json& doc) {
  require_keys(doc, "", {"schema", "chart", "parameters", "structure", "kmn", "deformation"});
  const Json& schema = member(doc, "", "schema");
  if (!schema.is_number_integer() || schema.get<int>() != 1)
    throw InputError("schema", "unsupported schema version (expected 1)");

  ChartDecl chart = read_chart(doc);
  ParamMap params;
  if (auto it = doc.find("parameters"); it != doc.end()) {
    if (!it->is_object())
      throw InputError("parameters", "expected an object of name: number");
    for (const auto& [name, value] : it->items()) {
      if (chart.index_of(name) >= 0)
        throw InputError("parameters." + name, "name shadows a coordinate");
      params[name] = number(value, "parameters." + name);
    }
  }
  ExprReader read(chart, params);
  const int dim = chart.dim();

  const Json& st = member(doc, "", "structure");
  if (!st.is_object() || st.size() != 1)
    throw InputError("structure", "expected exactly one of 'model', 'explicit', 'cr_chart'");

  Manifold m{chart, params, SourceKind::Explicit, {}, {}, {}, ChartStructure{chart, Tensor11(dim), VectorField::zero(dim), KForm(1, dim), MetricField(dim)}, {}, {}};
  if (auto it = st.find("model"); it != st.end()) {
    require_keys(*it, "structure.model", {"name", "mu"});
    const Json& name = member(*it, "structure.model", "name");
    if (!name.is_string())
      throw InputError("structure.model.name", "expected a registry name");
    ModelSpec spec;
    try {
      spec.realization = realization_from_name(name.get<std::string>());
    } catch (const DomainError& e) {
      throw InputError("structure.model.name", e.what());
    }
    spec.n = chart.n();
    if (auto mu = it->find("mu"); mu != it->end())
      spec.mu = number(*mu, "structure.model.mu");
    Model built = [&] {
      try {
        return build_model(spec);
      } catch (const DomainError& e) {
        throw InputError("structure.model", e.what());
      }
    }();
    built.structure.chart = chart;
    m.source = SourceKind::Model;
    m.model = spec;
    m.structure = built.structure;
    m.built_model = std::move(built);
  } else if (auto it = st.find("explicit"); it != st.end()) {
    const std::string w = "structure.explicit";
    require_keys(*it, w, {"phi", "xi", "eta", "g"});
    std::vector<Expr> phi = read.matrix(member(*it, w, "phi"), w + ".phi", dim);
    std::vector<Expr> xi = read.vector(member(*it, w, "xi"), w + ".xi", dim);
    std::vector<Expr> eta = read.vector(member(*it, w, "eta"), w + ".eta", dim);
    std::vector<Expr> g = read.matrix(member(*it, w, "g"), w + ".g", dim);
    check_symmetric(g, dim, chart);
    Tensor11 t(dim);
    MetricField mg(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        t(i, j) = phi[i * dim + j];
        if (j >= i)
          mg.set(i, j, g[i * dim + j]);
      }
    m.source = SourceKind::Explicit;
    m.structure = ChartStructure{chart, std::move(t), VectorField(std::move(xi)), one_form(std::move(eta)),
                                 std::move(mg)};
  } else if (auto it = st.find("cr_chart"); it != st.end()) {
    const std::string w = "structure.cr_chart";
    require_keys(*it, w, {"a", "g_hermitian"});
    CRChartData data{chart, read.vector(member(*it, w, "a"), w + ".a", chart.n()),
                     read.matrix(member(*it, w, "g_hermitian"), w + ".g_hermitian", chart.n())};
    try {
      validate_cr_chart(data, Sample::draw(chart, 0, 16), 1e-10);
    } catch (const DomainError& e) {
      throw InputError(w, e.what());
    }
    m.source = SourceKind::CrChart;
    m.structure = build_from_cr_chart(data);
    m.cr = std::move(data);
  } else {
    throw InputError("structure", "expected exactly one of 'model', 'explicit', 'cr_chart'");
  }

  if (auto it = doc.find("kmn"); it != doc.end()) {
    require_keys(*it, "kmn", {"kappa", "mu", "nu"});
    m.kmn = KMNTriple{read(member(*it, "kmn", "kappa"), "kmn.kappa"),
                      read(member(*it, "kmn", "mu"), "kmn.mu"), read(member(*it, "kmn", "nu"), "kmn.nu")};
  }
  if (!m.kmn && m.model) {
    KMNTriple k;
    if (model_kmn(*m.model, k))
      m.kmn = k;
  }
  if (auto it = doc.find("deformation"); it != doc.end()) {
    require_keys(*it, "deformation", {"alpha", "beta"});
    Deformation d;
    d.alpha = number(member(*it, "deformation", "alpha"), "deformation.alpha");
    d.beta = read(member(*it, "deformation", "beta"), "deformation.beta");
    if (!(d.alpha > 0))
      throw InputError("deformation.alpha", "must be positive");
    m.deformation = d;
  }
  return m;
}

Manifold load_manifold_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset to line/column
    std::size_t off = e.byte == 0 ? 0 : e.byte - 1;
    int line = 1, col = 1;
    for (std::size_t k = 0; k < off && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("", "invalid JSON at line " + std::to_string(line) + ", column " +
                             std::to_string(col));
  }
  return load_manifold(doc);
}

Manifold load_manifold_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_manifold_text(buf.str());
}

Manifold manifold_from_model(const ModelSpec& spec) {
  Model built = build_model(spec);
  Manifold m{built.structure.chart, {}, SourceKind::Model, spec, {}, {}, built.structure, {}, {}};
  KMNTriple k;
  if (model_kmn(spec, k))
    m.kmn = k;
  m.built_model = std::move(built);
  return m;
}

nlohmann::ordered_json structure_document(const ChartStructure& s,
                                          const std::optional<KMNTriple>& kmn) {
  const ChartDecl& chart = s.chart;
  const int dim = chart.dim();
  Json doc;
  doc["schema"] = 1;
  Json box = Json::array();
  for (const auto& iv : chart.box())
    box.push_back({iv.lo, iv.hi});
  doc["chart"] = {{"n", chart.n()}, {"coordinates", chart.names()}, {"box", box}};
  Json phi = Json::array(), g = Json::array(), xi = Json::array(), eta = Json::array();
  for (int i = 0; i < dim; ++i) {
    Json prow = Json::array(), grow = Json::array();
    for (int j = 0; j < dim; ++j) {
      prow.push_back(show(s.phi(i, j), chart));
      grow.push_back(show(s.g(i, j), chart));
    }
    phi.push_back(prow);
    g.push_back(grow);
    xi.push_back(show(s.xi[i], chart));
    eta.push_back(show(s.eta(i), chart));
  }
  doc["structure"] = {{"explicit", {{"phi", phi}, {"xi", xi}, {"eta", eta}, {"g", g}}}};
  if (kmn)
    doc["kmn"] = {{"kappa", show(kmn->kappa, chart)},
                  {"mu", show(kmn->mu, chart)},
                  {"nu", show(kmn->nu, chart)}};
  return doc;
}

KMNTriple deform_kmn(const KMNTriple& k, const Deformation& d, const VectorField& xi) {
  if (d.alpha == 1.0 && d.beta.is_one())
    return k;
  Expr b2 = d.beta * d.beta;
  return {k.kappa / b2, k.mu / d.beta, (k.nu * d.beta - xi.apply(d.beta)) / b2};
}

} // namespace accr
