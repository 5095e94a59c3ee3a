#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "accr/expr.hpp"
#include "accr/fields.hpp"

namespace accr::testing {

/// Random expression trees over `dim` coordinates. Division only appears as
/// 1 / (c + e^2) with c >= 1, so generated trees are finite everywhere.
class ExprGen {
public:
  ExprGen(std::uint64_t seed, int dim) : rng_(seed), dim_(dim) {}

  Expr tree(int depth) {
    if (depth <= 0 || coin(0.2))
      return leaf();
    switch (pick(9)) {
    case 0:
      return tree(depth - 1) + tree(depth - 1);
    case 1:
      return tree(depth - 1) - tree(depth - 1);
    case 2:
      return tree(depth - 1) * tree(depth - 1);
    case 3: {
      Expr d = tree(depth - 1);
      return tree(depth - 1) / (1.0 + uniform(0.0, 1.0) + d * d);
    }
    case 4:
      return pow(tree(depth - 1), 2 + pick(2));
    case 5:
      return sin(tree(depth - 1));
    case 6:
      return cos(tree(depth - 1));
    case 7:
      return exp(0.5 * tree(depth - 1) / (1.0 + pow(tree(depth - 2), 2)));
    default:
      return coin(0.5) ? sinh(0.5 * tree(depth - 1)) : cosh(0.5 * tree(depth - 1));
    }
  }

  /// Tree that may contain the imaginary unit and conj.
  Expr complex_tree(int depth) {
    Expr re = tree(depth);
    Expr im = tree(depth);
    Expr z = re + Expr::imag_unit() * im;
    return coin(0.3) ? conj(z) * tree(depth - 1) : z;
  }

  VectorField field(int depth) {
    std::vector<Expr> c;
    for (int k = 0; k < dim_; ++k)
      c.push_back(tree(depth));
    return VectorField(std::move(c));
  }

  KForm one_form_(int depth) {
    std::vector<Expr> c;
    for (int k = 0; k < dim_; ++k)
      c.push_back(tree(depth));
    return one_form(std::move(c));
  }

  KForm two_form(int depth) {
    KForm f(2, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        f.set(i, j, tree(depth));
    return f;
  }

  std::vector<double> point(double half_width = 0.8) {
    std::vector<double> p(dim_);
    for (auto& v : p)
      v = uniform(-half_width, half_width);
    return p;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool coin(double p) { return uniform(0.0, 1.0) < p; }

private:
  Expr leaf() {
    if (coin(0.65))
      return Expr::var(pick(dim_));
    return Expr::constant(std::round(uniform(-3.0, 3.0) * 4.0) / 4.0 + 0.5);
  }

  std::mt19937_64 rng_;
  int dim_;
};

/// Five-point central difference of e in coordinate k; error O(h^4).
inline Complex central_difference(const Expr& e, std::span<const double> p, int k,
                                  double h = 1e-3) {
  auto at = [&](double s) {
    std::vector<double> q(p.begin(), p.end());
    q[k] += s;
    return eval(e, q);
  };
  return (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
}

/// Relative scale for comparing a value against an oracle.
inline double scaled_gap(Complex a, Complex b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

} // namespace accr::testing
