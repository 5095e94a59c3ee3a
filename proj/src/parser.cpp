#include "accr/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace accr {

ParseError::ParseError(const std::string& message, std::size_t offset, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      detail_(message), offset_(offset), line_(line), column_(column) {}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

constexpr std::string_view kFunctions[] = {"sin", "cos", "sinh", "cosh", "exp", "conj"};

class Parser {
public:
  Parser(std::string_view src, const ChartDecl& chart, const std::vector<std::string>& params)
      : src_(src), chart_(chart), params_(params), aliases_(chart.aliases()) {
    advance();
  }

  Expr parse() {
    Expr e = expr();
    if (tok_.kind != Tok::End)
      fail("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
    int line = 1;
    int column = 1;
    for (std::size_t k = 0; k < offset && k < src_.size(); ++k) {
      if (src_[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(msg, offset, line, column);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, start, "end of input"};
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* first = src_.data() + pos_;
      const char* last = src_.data() + src_.size();
      double v = 0.0;
      auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc())
        fail("malformed number", start);
      pos_ += static_cast<std::size_t>(res.ptr - first);
      tok_ = {Tok::Number, start, src_.substr(start, pos_ - start), v};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      tok_ = {Tok::Ident, start, src_.substr(start, pos_ - start)};
      return;
    }
    ++pos_;
    Tok kind;
    switch (c) {
    case '+': kind = Tok::Plus; break;
    case '-': kind = Tok::Minus; break;
    case '*': kind = Tok::Star; break;
    case '/': kind = Tok::Slash; break;
    case '^': kind = Tok::Caret; break;
    case '(': kind = Tok::LParen; break;
    case ')': kind = Tok::RParen; break;
    case ',': kind = Tok::Comma; break;
    default:
      fail(std::string("unexpected character '") + c + "'", start);
    }
    tok_ = {kind, start, src_.substr(start, 1)};
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind)
      fail(std::string("expected ") + what + ", found '" + std::string(tok_.text) + "'",
           tok_.offset);
    advance();
  }

  Expr expr() {
    Expr e = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      bool minus = tok_.kind == Tok::Minus;
      advance();
      Expr rhs = term();
      e = minus ? e - rhs : e + rhs;
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      bool div = tok_.kind == Tok::Slash;
      advance();
      Expr rhs = unary();
      e = div ? e / rhs : e * rhs;
    }
    return e;
  }

  Expr unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return -unary();
    }
    if (tok_.kind == Tok::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  int integer_exponent() {
    std::size_t at = tok_.offset;
    bool paren = tok_.kind == Tok::LParen;
    if (paren)
      advance();
    bool neg = false;
    if (tok_.kind == Tok::Minus) {
      neg = true;
      advance();
    }
    if (tok_.kind != Tok::Number || tok_.text.find_first_of(".eE") != std::string_view::npos ||
        tok_.number > 1e6)
      fail("exponent must be an integer literal", at);
    int k = static_cast<int>(tok_.number);
    advance();
    if (paren)
      expect(Tok::RParen, "')'");
    return neg ? -k : k;
  }

  Expr power() {
    Expr base = primary();
    if (tok_.kind == Tok::Caret) {
      advance();
      return pow(base, integer_exponent());
    }
    return base;
  }

  Expr call(std::string_view fn, std::size_t at) {
    if (tok_.kind != Tok::LParen)
      fail("function '" + std::string(fn) + "' requires an argument list", at);
    advance();
    std::vector<Expr> args;
    if (tok_.kind != Tok::RParen) {
      args.push_back(expr());
      while (tok_.kind == Tok::Comma) {
        advance();
        args.push_back(expr());
      }
    }
    expect(Tok::RParen, "')'");
    if (args.size() != 1)
      fail("function '" + std::string(fn) + "' takes 1 argument, got " +
               std::to_string(args.size()),
           at);
    const Expr& a = args.front();
    if (fn == "sin") return sin(a);
    if (fn == "cos") return cos(a);
    if (fn == "sinh") return sinh(a);
    if (fn == "cosh") return cosh(a);
    if (fn == "exp") return exp(a);
    return conj(a);
  }

  Expr primary() {
    Token t = tok_;
    switch (t.kind) {
    case Tok::Number:
      advance();
      return Expr::constant(t.number);
    case Tok::LParen: {
      advance();
      Expr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    case Tok::Ident:
      advance();
      return identifier(t);
    default:
      fail("expected an operand, found '" + std::string(t.text) + "'", t.offset);
    }
  }

  Expr identifier(const Token& t) {
    std::string_view name = t.text;
    if (std::find(std::begin(kFunctions), std::end(kFunctions), name) != std::end(kFunctions))
      return call(name, t.offset);
    if (int k = chart_.index_of(name); k >= 0)
      return Expr::var(k);
    if (name == "i")
      return Expr::imag_unit();
    for (const auto& a : aliases_) {
      if (a.name == name) {
        Expr z = Expr::var(a.x) + Expr::imag_unit() * Expr::var(a.y);
        return a.conjugate ? conj(z) : z;
      }
    }
    if (std::find(params_.begin(), params_.end(), name) != params_.end())
      return Expr::param(std::string(name));
    if (tok_.kind == Tok::LParen)
      fail("unknown function '" + std::string(name) + "'", t.offset);
    fail("unknown identifier '" + std::string(name) + "'", t.offset);
  }

  std::string_view src_;
  const ChartDecl& chart_;
  const std::vector<std::string>& params_;
  std::vector<ChartDecl::Alias> aliases_;
  std::size_t pos_ = 0;
  Token tok_{Tok::End, 0, {}};
};

} // namespace

Expr parse_expression(std::string_view source, const ChartDecl& chart,
                      const std::vector<std::string>& parameters) {
  return Parser(source, chart, parameters).parse();
}

} // namespace accr
