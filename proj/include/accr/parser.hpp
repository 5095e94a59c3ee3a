#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "accr/chart.hpp"
#include "accr/expr.hpp"

namespace accr {

/// Syntax or name-resolution failure, located in the source text.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t offset, int line, int column);

  std::size_t offset() const { return offset_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

private:
  std::string detail_;
  std::size_t offset_;
  int line_;
  int column_;
};

/// Parse an arithmetic expression over the chart's coordinates.
///
/// Grammar:
///
///   expr    = term { ("+" | "-") term } ;
///   term    = unary { ("*" | "/") unary } ;
///   unary   = ("+" | "-") unary | power ;
///   power   = primary [ "^" integer ] ;
///   integer = [ "-" ] digits | "(" [ "-" ] digits ")" ;
///   primary = number | "i" | identifier | function "(" expr ")" | "(" expr ")" ;
///   function = "sin" | "cos" | "sinh" | "cosh" | "exp" | "conj" ;
///
/// Identifiers resolve, in order, to chart coordinates, the aliases
/// z<k> = x<k> + i*y<k> and zb<k> = conj(z<k>) (plus z/zb when n = 1), and
/// then to the names in `parameters`.
Expr parse_expression(std::string_view source, const ChartDecl& chart,
                      const std::vector<std::string>& parameters = {});

} // namespace accr
