#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "accr/chart.hpp"
#include "accr/expr.hpp"

namespace accr {

/// Seeded evaluation sites inside a chart's sampling box, stored row-major.
class PointSet {
public:
  PointSet(int dim, std::vector<double> coords);

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> operator[](std::size_t k) const {
    return {coords_.data() + k * dim_, static_cast<std::size_t>(dim_)};
  }

private:
  int dim_;
  std::vector<double> coords_;
};

/// `count` points drawn uniformly from the chart box. The stream is
/// mt19937_64 with a fixed 53-bit mantissa mapping, so it is reproducible
/// across standard libraries.
PointSet sample_points(const ChartDecl& chart, std::uint64_t seed, std::size_t count);

/// A batch of expressions lowered to a flat instruction tape.
///
/// Structurally identical subtrees are merged, so every shared subexpression
/// is computed once per point. Instances are immutable and may be evaluated
/// from several threads, each with its own scratch buffer.
class Kernel {
public:
  explicit Kernel(std::vector<Expr> outputs);

  std::size_t size() const { return outputs_.size(); }
  std::size_t instruction_count() const { return code_.size(); }
  const std::vector<std::string>& parameters() const { return params_; }

  /// Parameter values in the order of parameters(); throws on a missing name.
  std::vector<double> bind(const ParamMap& params) const;

  void evaluate(std::span<const double> point, std::span<const double> param_values,
                std::span<Complex> out, std::vector<Complex>& scratch) const;

private:
  struct Instr {
    Op op;
    int ival = 0;
    double value = 0.0;
    std::uint32_t first = 0; // into args_
    std::uint32_t count = 0;
  };
  friend class KernelBuilder;

  std::vector<Instr> code_;
  std::vector<std::uint32_t> args_;
  std::vector<std::uint32_t> outputs_;
  std::vector<std::string> params_;
};

/// Row-per-point table of kernel outputs.
class ValueTable {
public:
  ValueTable(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
  std::size_t cols() const { return cols_; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

private:
  std::size_t cols_;
  std::vector<Complex> data_;
};

enum class Exec { Serial, Parallel };

/// Reference implementation: one point after another.
ValueTable evaluate_serial(const Kernel& kernel, const PointSet& points,
                           const ParamMap& params = {});

/// OpenMP over points. Each point writes its own row with the same
/// instruction sequence, so the result is bit-identical to evaluate_serial.
ValueTable evaluate_parallel(const Kernel& kernel, const PointSet& points,
                             const ParamMap& params = {});

ValueTable evaluate(const Kernel& kernel, const PointSet& points, const ParamMap& params,
                    Exec exec);

/// Policy used by the geometry checks; Parallel unless changed.
Exec default_exec();
void set_default_exec(Exec exec);

} // namespace accr
