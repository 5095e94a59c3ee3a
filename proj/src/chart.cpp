#include "accr/chart.hpp"

#include <algorithm>
#include <set>

#include "accr/expr.hpp"

namespace accr {

ChartDecl::ChartDecl(int n, std::vector<std::string> names, std::vector<Interval> box)
    : n_(n), names_(std::move(names)), box_(std::move(box)) {
  if (n_ < 1)
    throw DomainError("chart: n must be at least 1");
  if (static_cast<int>(names_.size()) != dim())
    throw DomainError("chart: expected " + std::to_string(dim()) + " coordinate names, got " +
                      std::to_string(names_.size()));
  if (static_cast<int>(box_.size()) != dim())
    throw DomainError("chart: expected " + std::to_string(dim()) + " box intervals, got " +
                      std::to_string(box_.size()));
  std::set<std::string> seen;
  for (const auto& name : names_)
    if (name.empty() || !seen.insert(name).second)
      throw DomainError("chart: coordinate names must be nonempty and distinct");
  for (const auto& iv : box_)
    if (!(iv.lo < iv.hi))
      throw DomainError("chart: sampling box interval is empty");
}

ChartDecl ChartDecl::standard(int n, double half_width) {
  if (n < 1)
    throw DomainError("chart: n must be at least 1");
  std::vector<std::string> names{"t"};
  for (int i = 1; i <= n; ++i)
    names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    names.push_back("y" + std::to_string(i));
  std::vector<Interval> box(2 * n + 1, Interval{-half_width, half_width});
  return ChartDecl(n, std::move(names), std::move(box));
}

int ChartDecl::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

std::vector<ChartDecl::Alias> ChartDecl::aliases() const {
  std::vector<Alias> out;
  for (int i = 0; i < n_; ++i) {
    std::string k = std::to_string(i + 1);
    out.push_back({"z" + k, x_index(i), y_index(i), false});
    out.push_back({"zb" + k, x_index(i), y_index(i), true});
  }
  if (n_ == 1) {
    out.push_back({"z", x_index(0), y_index(0), false});
    out.push_back({"zb", x_index(0), y_index(0), true});
  }
  // a declared coordinate name shadows an alias of the same spelling
  std::erase_if(out, [this](const Alias& a) { return index_of(a.name) >= 0; });
  return out;
}

bool ChartDecl::operator==(const ChartDecl& other) const {
  if (n_ != other.n_ || names_ != other.names_)
    return false;
  for (std::size_t k = 0; k < box_.size(); ++k)
    if (box_[k].lo != other.box_[k].lo || box_[k].hi != other.box_[k].hi)
      return false;
  return true;
}

} // namespace accr
