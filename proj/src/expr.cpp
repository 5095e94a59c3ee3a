#include "accr/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

namespace accr {
namespace {

// Extra per-node facts kept alongside Node: which coordinates occur and
// whether the subtree is real-valued on real arguments.
struct Facts {
  std::uint64_t vars = 0;
  bool real = true;
};

} // namespace

// Facts are stored inside an extended node type so they share its lifetime.
struct FactNode : Node {
  Facts facts;
};

namespace {

const Facts& facts_of(const Node* n) { return static_cast<const FactNode*>(n)->facts; }

} // namespace

Expr Expr::make(Op op, std::vector<Expr> args, double value, int ival,
                std::string name) {
  auto node = std::make_shared<FactNode>();
  node->op = op;
  node->value = value;
  node->ival = ival;
  node->name = std::move(name);
  int depth = 0;
  Facts f;
  switch (op) {
  case Op::ImagUnit:
    f.real = false;
    break;
  case Op::Var:
    if (ival < 0 || ival >= 64)
      throw DomainError("coordinate index out of range: " + std::to_string(ival));
    f.vars = std::uint64_t{1} << ival;
    break;
  default:
    break;
  }
  for (const auto& a : args) {
    depth = std::max(depth, a.depth() + 1);
    const Facts& af = facts_of(a.id());
    f.vars |= af.vars;
    f.real = f.real && af.real;
  }
  if (op == Op::Conj)
    f.real = false;
  node->args = std::move(args);
  node->depth = depth;
  node->facts = f;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr::Expr() : Expr(constant(0.0)) {}
Expr::Expr(double value) : Expr(constant(value)) {}

Expr Expr::constant(double value) { return make(Op::Const, {}, value); }
Expr Expr::imag_unit() { return make(Op::ImagUnit, {}); }
Expr Expr::var(int index) { return make(Op::Var, {}, 0.0, index); }
Expr Expr::param(std::string name) { return make(Op::Param, {}, 0.0, 0, std::move(name)); }

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
int Expr::index() const { return node_->ival; }
int Expr::exponent() const { return node_->ival; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::args() const { return node_->args; }
int Expr::depth() const { return node_->depth; }

bool Expr::is_zero() const { return op() == Op::Const && value() == 0.0; }
bool Expr::is_one() const { return op() == Op::Const && value() == 1.0; }

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Expr> terms;
  double c = 0.0;
  auto collect = [&](const Expr& e) {
    if (e.op() == Op::Add) {
      for (const auto& t : e.args()) {
        if (t.is_constant())
          c += t.value();
        else
          terms.push_back(t);
      }
    } else if (e.is_constant()) {
      c += e.value();
    } else {
      terms.push_back(e);
    }
  };
  collect(a);
  collect(b);
  if (terms.empty())
    return Expr::constant(c);
  if (c == 0.0 && terms.size() == 1)
    return terms.front();
  if (c != 0.0)
    terms.insert(terms.begin(), Expr::constant(c));
  return Expr::make(Op::Add, std::move(terms));
}

Expr operator-(const Expr& a) {
  switch (a.op()) {
  case Op::Const:
    return Expr::constant(-a.value());
  case Op::Neg:
    return a.args()[0];
  case Op::Mul:
    if (a.args()[0].is_constant()) {
      std::vector<Expr> f(a.args().begin(), a.args().end());
      f[0] = Expr::constant(-f[0].value());
      if (f[0].is_one())
        f.erase(f.begin());
      return f.size() == 1 ? f[0] : Expr::make(Op::Mul, std::move(f));
    }
    break;
  default:
    break;
  }
  return Expr::make(Op::Neg, {a});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero())
    return a;
  return a + (-b);
}

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Expr> factors;
  double c = 1.0;
  int imag = 0;
  std::function<void(const Expr&)> collect = [&](const Expr& e) {
    switch (e.op()) {
    case Op::Mul:
      for (const auto& f : e.args())
        collect(f);
      break;
    case Op::Neg:
      c = -c;
      collect(e.args()[0]);
      break;
    case Op::Const:
      c *= e.value();
      break;
    case Op::ImagUnit:
      ++imag;
      break;
    default:
      factors.push_back(e);
    }
  };
  collect(a);
  collect(b);
  if (c == 0.0)
    return Expr::constant(0.0);
  if (imag % 4 >= 2)
    c = -c;
  if (imag % 2 == 1)
    factors.insert(factors.begin(), Expr::imag_unit());
  if (factors.empty())
    return Expr::constant(c);
  bool negate = false;
  if (c == -1.0) {
    negate = true;
  } else if (c != 1.0) {
    factors.insert(factors.begin(), Expr::constant(c));
  }
  Expr prod = factors.size() == 1 ? factors.front() : Expr::make(Op::Mul, std::move(factors));
  return negate ? Expr::make(Op::Neg, {prod}) : prod;
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_zero())
    return a;
  if (b.is_one())
    return a;
  if (a.is_constant() && b.is_constant() && b.value() != 0.0)
    return Expr::constant(a.value() / b.value());
  return Expr::make(Op::Div, {a, b});
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0)
    return Expr::constant(1.0);
  if (exponent == 1)
    return base;
  if (base.is_constant()) {
    if (base.value() != 0.0 || exponent > 0)
      return Expr::constant(std::pow(base.value(), exponent));
  }
  if (base.op() == Op::Pow) {
    long long k = static_cast<long long>(base.exponent()) * exponent;
    if (k >= INT32_MIN && k <= INT32_MAX)
      return pow(base.args()[0], static_cast<int>(k));
  }
  return Expr::make(Op::Pow, {base}, 0.0, exponent);
}

Expr Expr::unary(Op op, const Expr& a) {
  if (a.is_constant()) {
    double v = a.value();
    switch (op) {
    case Op::Sin: return constant(std::sin(v));
    case Op::Cos: return constant(std::cos(v));
    case Op::Sinh: return constant(std::sinh(v));
    case Op::Cosh: return constant(std::cosh(v));
    case Op::Exp: return constant(std::exp(v));
    case Op::Conj: return a;
    default: break;
    }
  }
  return make(op, {a});
}

Expr sin(const Expr& a) { return Expr::unary(Op::Sin, a); }
Expr cos(const Expr& a) { return Expr::unary(Op::Cos, a); }
Expr sinh(const Expr& a) { return Expr::unary(Op::Sinh, a); }
Expr cosh(const Expr& a) { return Expr::unary(Op::Cosh, a); }
Expr exp(const Expr& a) { return Expr::unary(Op::Exp, a); }

Expr conj(const Expr& a) {
  if (facts_of(a.id()).real)
    return a;
  if (a.op() == Op::Conj)
    return a.args()[0];
  if (a.op() == Op::ImagUnit)
    return -a;
  return Expr::make(Op::Conj, {a});
}

bool is_real_valued(const Expr& e) { return facts_of(e.id()).real; }

Expr real_part(const Expr& e) { return is_real_valued(e) ? e : (e + conj(e)) * 0.5; }

Expr imag_part(const Expr& e) {
  if (is_real_valued(e))
    return Expr::constant(0.0);
  return (e - conj(e)) * Expr::imag_unit() * -0.5;
}

bool depends_on(const Expr& e, int coordinate) {
  if (coordinate < 0 || coordinate >= 64)
    return false;
  return (facts_of(e.id()).vars >> coordinate) & 1U;
}

Expr Differentiator::operator()(const Expr& e, int k) {
  if (!depends_on(e, k))
    return Expr::constant(0.0);
  if (e.op() == Op::Var)
    return Expr::constant(1.0);
  if (static_cast<int>(memo_.size()) <= k)
    memo_.resize(k + 1);
  auto& memo = memo_[k];
  if (auto it = memo.find(e.id()); it != memo.end())
    return it->second.derivative;

  auto args = e.args();
  Expr d;
  switch (e.op()) {
  case Op::Add:
    for (const auto& t : args)
      d += (*this)(t, k);
    break;
  case Op::Mul:
    for (std::size_t j = 0; j < args.size(); ++j) {
      Expr dj = (*this)(args[j], k);
      if (dj.is_zero())
        continue;
      Expr term = dj;
      for (std::size_t m = 0; m < args.size(); ++m)
        if (m != j)
          term = m < j ? args[m] * term : term * args[m];
      d += term;
    }
    break;
  case Op::Div: {
    const Expr& num = args[0];
    const Expr& den = args[1];
    Expr dn = (*this)(num, k);
    Expr dd = (*this)(den, k);
    if (dd.is_zero())
      d = dn / den;
    else
      d = (dn * den - num * dd) / pow(den, 2);
    break;
  }
  case Op::Pow: {
    int n = e.exponent();
    d = Expr::constant(n) * pow(args[0], n - 1) * (*this)(args[0], k);
    break;
  }
  case Op::Neg:
    d = -(*this)(args[0], k);
    break;
  case Op::Sin:
    d = cos(args[0]) * (*this)(args[0], k);
    break;
  case Op::Cos:
    d = -(sin(args[0]) * (*this)(args[0], k));
    break;
  case Op::Sinh:
    d = cosh(args[0]) * (*this)(args[0], k);
    break;
  case Op::Cosh:
    d = sinh(args[0]) * (*this)(args[0], k);
    break;
  case Op::Exp:
    d = e * (*this)(args[0], k);
    break;
  case Op::Conj:
    d = conj((*this)(args[0], k));
    break;
  default:
    d = Expr::constant(0.0);
  }
  memo.emplace(e.id(), Entry{e, d});
  return d;
}

Expr differentiate(const Expr& e, int coordinate) {
  Differentiator diff;
  return diff(e, coordinate);
}

Complex eval(const Expr& e, std::span<const double> point, const ParamMap& params) {
  auto args = e.args();
  switch (e.op()) {
  case Op::Const:
    return {e.value(), 0.0};
  case Op::ImagUnit:
    return {0.0, 1.0};
  case Op::Var:
    if (e.index() >= static_cast<int>(point.size()))
      throw DomainError("point has " + std::to_string(point.size()) +
                        " coordinates, expression uses index " + std::to_string(e.index()));
    return {point[e.index()], 0.0};
  case Op::Param: {
    auto it = params.find(e.name());
    if (it == params.end())
      throw EvalError("unbound parameter '" + e.name() + "'");
    return {it->second, 0.0};
  }
  case Op::Add: {
    Complex s = eval(args[0], point, params);
    for (std::size_t j = 1; j < args.size(); ++j)
      s += eval(args[j], point, params);
    return s;
  }
  case Op::Mul: {
    Complex p = eval(args[0], point, params);
    for (std::size_t j = 1; j < args.size(); ++j)
      p *= eval(args[j], point, params);
    return p;
  }
  case Op::Div: {
    Complex den = eval(args[1], point, params);
    if (den == Complex{})
      throw EvalError("division by zero");
    return eval(args[0], point, params) / den;
  }
  case Op::Pow: {
    Complex b = eval(args[0], point, params);
    int n = e.exponent();
    if (n < 0 && b == Complex{})
      throw EvalError("division by zero (negative power of zero)");
    Complex r{1.0, 0.0};
    Complex f = n < 0 ? Complex{1.0, 0.0} / b : b;
    for (unsigned k = static_cast<unsigned>(n < 0 ? -static_cast<long long>(n) : n); k; k >>= 1) {
      if (k & 1U)
        r *= f;
      f *= f;
    }
    return r;
  }
  case Op::Neg:
    return -eval(args[0], point, params);
  case Op::Sin:
    return std::sin(eval(args[0], point, params));
  case Op::Cos:
    return std::cos(eval(args[0], point, params));
  case Op::Sinh:
    return std::sinh(eval(args[0], point, params));
  case Op::Cosh:
    return std::cosh(eval(args[0], point, params));
  case Op::Exp:
    return std::exp(eval(args[0], point, params));
  case Op::Conj:
    return std::conj(eval(args[0], point, params));
  }
  return {};
}

namespace {

Expr rebuild(const Expr& e, std::span<const Expr> args) {
  switch (e.op()) {
  case Op::Add: {
    Expr s;
    for (const auto& a : args)
      s += a;
    return s;
  }
  case Op::Mul: {
    Expr p = 1.0;
    for (const auto& a : args)
      p *= a;
    return p;
  }
  case Op::Div: return args[0] / args[1];
  case Op::Pow: return pow(args[0], e.exponent());
  case Op::Neg: return -args[0];
  case Op::Sin: return sin(args[0]);
  case Op::Cos: return cos(args[0]);
  case Op::Sinh: return sinh(args[0]);
  case Op::Cosh: return cosh(args[0]);
  case Op::Exp: return exp(args[0]);
  case Op::Conj: return conj(args[0]);
  default: return e;
  }
}

Expr bind_rec(const Expr& e, const ParamMap& params,
              std::unordered_map<const Node*, Expr>& memo) {
  if (e.op() == Op::Param) {
    auto it = params.find(e.name());
    return it == params.end() ? e : Expr::constant(it->second);
  }
  if (e.args().empty())
    return e;
  if (auto it = memo.find(e.id()); it != memo.end())
    return it->second;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  for (const auto& a : e.args())
    args.push_back(bind_rec(a, params, memo));
  Expr r = rebuild(e, args);
  memo.emplace(e.id(), r);
  return r;
}

int precedence(const Expr& e) {
  switch (e.op()) {
  case Op::Add: return 1;
  case Op::Mul:
  case Op::Div: return 2;
  case Op::Neg: return 3;
  case Op::Pow: return 4;
  case Op::Const: return e.value() < 0 ? 3 : 5;
  default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Expr& e, std::span<const std::string> names, std::string& out);

void print_child(const Expr& e, int min_prec, std::span<const std::string> names,
                 std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print(e, names, out);
    out += ')';
  } else {
    print(e, names, out);
  }
}

const char* function_name(Op op) {
  switch (op) {
  case Op::Sin: return "sin";
  case Op::Cos: return "cos";
  case Op::Sinh: return "sinh";
  case Op::Cosh: return "cosh";
  case Op::Exp: return "exp";
  case Op::Conj: return "conj";
  default: return "?";
  }
}

void print(const Expr& e, std::span<const std::string> names, std::string& out) {
  auto args = e.args();
  switch (e.op()) {
  case Op::Const:
    out += format_number(e.value());
    break;
  case Op::ImagUnit:
    out += 'i';
    break;
  case Op::Var:
    if (e.index() < static_cast<int>(names.size()))
      out += names[e.index()];
    else
      out += "_c" + std::to_string(e.index());
    break;
  case Op::Param:
    out += e.name();
    break;
  case Op::Add:
    for (std::size_t j = 0; j < args.size(); ++j) {
      if (j > 0) {
        const Expr& t = args[j];
        bool negative = t.op() == Op::Neg ||
                        (t.op() == Op::Mul && t.args()[0].is_constant() && t.args()[0].value() < 0);
        if (negative) {
          out += " - ";
          print_child(-t, 2, names, out);
          continue;
        }
        out += " + ";
      }
      print_child(args[j], j == 0 ? 1 : 2, names, out);
    }
    break;
  case Op::Mul:
    for (std::size_t j = 0; j < args.size(); ++j) {
      if (j > 0)
        out += '*';
      print_child(args[j], j == 0 ? 2 : 4, names, out);
    }
    break;
  case Op::Div:
    print_child(args[0], 2, names, out);
    out += '/';
    print_child(args[1], 4, names, out);
    break;
  case Op::Pow:
    print_child(args[0], 5, names, out);
    out += '^';
    if (e.exponent() < 0)
      out += "(" + std::to_string(e.exponent()) + ")";
    else
      out += std::to_string(e.exponent());
    break;
  case Op::Neg:
    out += '-';
    print_child(args[0], 4, names, out);
    break;
  default:
    out += function_name(e.op());
    out += '(';
    print(args[0], names, out);
    out += ')';
  }
}

} // namespace

Expr bind_params(const Expr& e, const ParamMap& params) {
  std::unordered_map<const Node*, Expr> memo;
  return bind_rec(e, params, memo);
}

std::string to_string(const Expr& e, std::span<const std::string> names) {
  std::string out;
  print(e, names, out);
  return out;
}

} // namespace accr
