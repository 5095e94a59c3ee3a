// Serial vs OpenMP evaluation of the kernels the checks run.
#include <benchmark/benchmark.h>

#include "accr/models.hpp"
#include "accr/pack.hpp"

#include <map>

using namespace accr;

namespace {

// Curvature blocks and Christoffel symbols of the n = 2 model: the heaviest
// tape the verification suite compiles.
const Kernel& curvature_kernel() {
  static const Kernel kernel = [] {
    Model m = build_model({Realization::ModelFrame, 2, 1.5});
    Analysis an(m.structure);
    Pack pack;
    pack.add(an.connection().symbols());
    pack.add(an.curvature().blocks());
    return pack.compile();
  }();
  return kernel;
}

const PointSet& points(std::size_t count) {
  static std::map<std::size_t, PointSet> cache;
  auto it = cache.find(count);
  if (it == cache.end())
    it = cache.emplace(count, sample_points(ChartDecl::standard(2), 1, count)).first;
  return it->second;
}

void BM_Serial(benchmark::State& state) {
  const Kernel& k = curvature_kernel();
  const PointSet& pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_serial(k, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Parallel(benchmark::State& state) {
  const Kernel& k = curvature_kernel();
  const PointSet& pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluate_parallel(k, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_Serial)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
