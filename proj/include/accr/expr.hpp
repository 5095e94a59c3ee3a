#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace accr {

using Complex = std::complex<double>;
using ParamMap = std::map<std::string, double>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised by pointwise evaluation (division by zero, unbound parameter).
class EvalError : public Error {
public:
  using Error::Error;
};

/// Raised when operands live on incompatible charts or have the wrong shape.
class DomainError : public Error {
public:
  using Error::Error;
};

enum class Op : std::uint8_t {
  Const,
  ImagUnit,
  Var,
  Param,
  Add,
  Mul,
  Div,
  Pow,
  Neg,
  Sin,
  Cos,
  Sinh,
  Cosh,
  Exp,
  Conj,
};

struct Node;

/// Immutable symbolic expression over real chart coordinates.
///
/// Nodes are shared, so copying an Expr is cheap and subtrees built once are
/// reused by identity. The constructors below fold real constants and flatten
/// nested sums and products; nothing else is simplified.
class Expr {
public:
  Expr();
  Expr(double value); // NOLINT(google-explicit-constructor)

  static Expr constant(double value);
  static Expr imag_unit();
  static Expr var(int index);
  static Expr param(std::string name);

  Op op() const;
  double value() const;             // Const
  int index() const;                // Var
  int exponent() const;             // Pow
  const std::string& name() const;  // Param
  std::span<const Expr> args() const;

  bool is_constant() const { return op() == Op::Const; }
  bool is_zero() const;
  bool is_one() const;

  /// Node identity, stable for the lifetime of any Expr sharing the node.
  const Node* id() const { return node_.get(); }

  /// Height of the tree; leaves have depth 0.
  int depth() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  friend Expr pow(const Expr& base, int exponent);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr sinh(const Expr& a);
  friend Expr cosh(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr conj(const Expr& a);

private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, std::vector<Expr> args, double value = 0.0,
                   int ival = 0, std::string name = {});
  static Expr unary(Op op, const Expr& a);

  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int ival = 0; // variable index or integer exponent
  std::string name;
  std::vector<Expr> args;
  int depth = 0;
};

Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sinh(const Expr& a);
Expr cosh(const Expr& a);
Expr exp(const Expr& a);
Expr conj(const Expr& a);

/// True when the tree contains no imaginary unit, so it is real on real points.
bool is_real_valued(const Expr& e);

/// Real and imaginary parts as expressions (valid for any complex-valued e).
Expr real_part(const Expr& e);
Expr imag_part(const Expr& e);

/// Exact partial derivative with respect to chart coordinate `coordinate`.
Expr differentiate(const Expr& e, int coordinate);

/// Differentiation with a memo that persists across calls, so that repeated
/// derivatives of expressions sharing subtrees stay shared.
class Differentiator {
public:
  Expr operator()(const Expr& e, int coordinate);

private:
  // key: node identity per coordinate; the stored source keeps the node alive
  struct Entry {
    Expr source;
    Expr derivative;
  };
  std::vector<std::unordered_map<const Node*, Entry>> memo_;
};

/// Direct recursive evaluation.
Complex eval(const Expr& e, std::span<const double> point,
             const ParamMap& params = {});

/// Replace named parameters by constants.
Expr bind_params(const Expr& e, const ParamMap& params);

/// Whether the expression mentions coordinate `coordinate`.
bool depends_on(const Expr& e, int coordinate);

/// Render in the parser's grammar; coordinate i prints as names[i].
std::string to_string(const Expr& e, std::span<const std::string> names);

} // namespace accr
