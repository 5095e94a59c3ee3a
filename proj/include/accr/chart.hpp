#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace accr {

struct Interval {
  double lo = -0.8;
  double hi = 0.8;
};

/// Real chart (t, x^1..x^n, y^1..y^n) of dimension 2n+1 with a sampling box.
class ChartDecl {
public:
  struct Alias {
    std::string name; // z1 or zb1 (and z / zb when n == 1)
    int x = 0;
    int y = 0;
    bool conjugate = false;
  };

  ChartDecl(int n, std::vector<std::string> names, std::vector<Interval> box);

  /// Chart with names t, x1..xn, y1..yn and box [-half_width, half_width]^(2n+1).
  static ChartDecl standard(int n, double half_width = 0.8);

  int n() const { return n_; }
  int dim() const { return 2 * n_ + 1; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Interval>& box() const { return box_; }

  static constexpr int t_index() { return 0; }
  int x_index(int i) const { return 1 + i; }      // i in [0, n)
  int y_index(int i) const { return 1 + n_ + i; } // i in [0, n)

  /// Coordinate index of `name`, or -1.
  int index_of(std::string_view name) const;

  /// z^i = x^i + i y^i and its conjugate, as parser-level rewrites.
  std::vector<Alias> aliases() const;

  bool operator==(const ChartDecl& other) const;

private:
  int n_;
  std::vector<std::string> names_;
  std::vector<Interval> box_;
};

} // namespace accr
