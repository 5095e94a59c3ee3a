#include "accr/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <random>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace accr {

PointSet::PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ <= 0 || coords_.size() % static_cast<std::size_t>(dim_) != 0)
    throw DomainError("point set: coordinate count is not a multiple of the dimension");
}

PointSet sample_points(const ChartDecl& chart, std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  const auto& box = chart.box();
  std::vector<double> coords;
  coords.reserve(count * box.size());
  for (std::size_t k = 0; k < count; ++k) {
    for (const auto& iv : box) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      coords.push_back(iv.lo + u * (iv.hi - iv.lo));
    }
  }
  return PointSet(chart.dim(), std::move(coords));
}

class KernelBuilder {
public:
  explicit KernelBuilder(Kernel& k) : k_(k) {}

  std::uint32_t lower(const Expr& e) {
    if (auto it = by_node_.find(e.id()); it != by_node_.end())
      return it->second;
    Kernel::Instr ins{e.op()};
    Key key{e.op(), 0, 0, {}};
    switch (e.op()) {
    case Op::Const:
      ins.value = e.value();
      key.bits = std::bit_cast<std::uint64_t>(e.value());
      break;
    case Op::Var:
      ins.ival = e.index();
      key.ival = e.index();
      break;
    case Op::Pow:
      ins.ival = e.exponent();
      key.ival = e.exponent();
      break;
    case Op::Param: {
      auto& names = k_.params_;
      auto it = std::find(names.begin(), names.end(), e.name());
      if (it == names.end()) {
        names.push_back(e.name());
        it = names.end() - 1;
      }
      ins.ival = static_cast<int>(it - names.begin());
      key.ival = ins.ival;
      break;
    }
    default:
      break;
    }
    std::vector<std::uint32_t> children;
    children.reserve(e.args().size());
    for (const auto& a : e.args())
      children.push_back(lower(a));
    key.children = children;
    std::uint32_t slot;
    if (auto it = by_key_.find(key); it != by_key_.end()) {
      slot = it->second;
    } else {
      ins.first = static_cast<std::uint32_t>(k_.args_.size());
      ins.count = static_cast<std::uint32_t>(children.size());
      k_.args_.insert(k_.args_.end(), children.begin(), children.end());
      slot = static_cast<std::uint32_t>(k_.code_.size());
      k_.code_.push_back(ins);
      by_key_.emplace(std::move(key), slot);
    }
    keep_.push_back(e);
    by_node_.emplace(e.id(), slot);
    return slot;
  }

private:
  struct Key {
    Op op;
    std::uint64_t bits;
    int ival;
    std::vector<std::uint32_t> children;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<std::uint64_t>{}(k.bits) ^ (static_cast<std::size_t>(k.op) << 1) ^
                      (std::hash<int>{}(k.ival) << 7);
      for (auto c : k.children)
        h = h * 1099511628211ULL ^ c;
      return h;
    }
  };

  Kernel& k_;
  std::unordered_map<const Node*, std::uint32_t> by_node_;
  std::unordered_map<Key, std::uint32_t, KeyHash> by_key_;
  std::vector<Expr> keep_;
};

Kernel::Kernel(std::vector<Expr> outputs) {
  KernelBuilder builder(*this);
  outputs_.reserve(outputs.size());
  for (const auto& e : outputs)
    outputs_.push_back(builder.lower(e));
}

std::vector<double> Kernel::bind(const ParamMap& params) const {
  std::vector<double> values;
  values.reserve(params_.size());
  for (const auto& name : params_) {
    auto it = params.find(name);
    if (it == params.end())
      throw EvalError("unbound parameter '" + name + "'");
    values.push_back(it->second);
  }
  return values;
}

void Kernel::evaluate(std::span<const double> point, std::span<const double> param_values,
                      std::span<Complex> out, std::vector<Complex>& scratch) const {
  scratch.resize(code_.size());
  Complex* v = scratch.data();
  const std::uint32_t* a = args_.data();
  for (std::size_t s = 0; s < code_.size(); ++s) {
    const Instr& ins = code_[s];
    const std::uint32_t* c = a + ins.first;
    switch (ins.op) {
    case Op::Const:
      v[s] = {ins.value, 0.0};
      break;
    case Op::ImagUnit:
      v[s] = {0.0, 1.0};
      break;
    case Op::Var:
      if (ins.ival >= static_cast<int>(point.size()))
        throw DomainError("point has fewer coordinates than the expression uses");
      v[s] = {point[ins.ival], 0.0};
      break;
    case Op::Param:
      v[s] = {param_values[ins.ival], 0.0};
      break;
    case Op::Add: {
      Complex acc = v[c[0]];
      for (std::uint32_t j = 1; j < ins.count; ++j)
        acc += v[c[j]];
      v[s] = acc;
      break;
    }
    case Op::Mul: {
      Complex acc = v[c[0]];
      for (std::uint32_t j = 1; j < ins.count; ++j)
        acc *= v[c[j]];
      v[s] = acc;
      break;
    }
    case Op::Div: {
      Complex den = v[c[1]];
      if (den == Complex{})
        throw EvalError("division by zero");
      v[s] = v[c[0]] / den;
      break;
    }
    case Op::Pow: {
      Complex b = v[c[0]];
      int n = ins.ival;
      if (n < 0 && b == Complex{})
        throw EvalError("division by zero (negative power of zero)");
      Complex r{1.0, 0.0};
      Complex f = n < 0 ? Complex{1.0, 0.0} / b : b;
      for (unsigned k = static_cast<unsigned>(n < 0 ? -static_cast<long long>(n) : n); k;
           k >>= 1) {
        if (k & 1U)
          r *= f;
        f *= f;
      }
      v[s] = r;
      break;
    }
    case Op::Neg:
      v[s] = -v[c[0]];
      break;
    case Op::Sin:
      v[s] = std::sin(v[c[0]]);
      break;
    case Op::Cos:
      v[s] = std::cos(v[c[0]]);
      break;
    case Op::Sinh:
      v[s] = std::sinh(v[c[0]]);
      break;
    case Op::Cosh:
      v[s] = std::cosh(v[c[0]]);
      break;
    case Op::Exp:
      v[s] = std::exp(v[c[0]]);
      break;
    case Op::Conj:
      v[s] = std::conj(v[c[0]]);
      break;
    }
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k)
    out[k] = v[outputs_[k]];
}

ValueTable evaluate_serial(const Kernel& kernel, const PointSet& points, const ParamMap& params) {
  std::vector<double> pv = kernel.bind(params);
  ValueTable table(points.size(), kernel.size());
  std::vector<Complex> scratch;
  for (std::size_t p = 0; p < points.size(); ++p)
    kernel.evaluate(points[p], pv, table.row(p), scratch);
  return table;
}

ValueTable evaluate_parallel(const Kernel& kernel, const PointSet& points, const ParamMap& params) {
  std::vector<double> pv = kernel.bind(params);
  ValueTable table(points.size(), kernel.size());
  const auto count = static_cast<std::ptrdiff_t>(points.size());
  // first failing point wins, independent of thread scheduling
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<bool> failed{false};
#pragma omp parallel
  {
    std::vector<Complex> scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
      try {
        kernel.evaluate(points[p], pv, table.row(p), scratch);
      } catch (...) {
        errors[p] = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (failed.load())
    for (auto& e : errors)
      if (e)
        std::rethrow_exception(e);
  return table;
}

ValueTable evaluate(const Kernel& kernel, const PointSet& points, const ParamMap& params,
                    Exec exec) {
  return exec == Exec::Parallel ? evaluate_parallel(kernel, points, params)
                                : evaluate_serial(kernel, points, params);
}

namespace {
std::atomic<Exec> g_exec{Exec::Parallel};
}

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec exec) { g_exec.store(exec); }

} // namespace accr
