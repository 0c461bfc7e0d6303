// Serial vs OpenMP construction of the chart grid and leaf samples.
// On a single core the two policies should time the same; the parallel
// speedup shows up only with OMP_NUM_THREADS > 1.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "frob/frobenius.hpp"
#include "frob/scenario.hpp"

using namespace frob;

namespace {

const Scenario& scenario(int which) {
  static const Scenario sphere = resolve_scenario("sphere_foliation");
  static const Scenario twisted = resolve_scenario("twisted_levels");
  return which == 0 ? sphere : twisted;
}

ChartOptions options(ExecPolicy policy, const Scenario& s) {
  ChartOptions o;
  o.policy = policy;
  o.h = s.numerics().step;
  return o;
}

void chart_grid(benchmark::State& state, ExecPolicy policy) {
  const Scenario& s = scenario(static_cast<int>(state.range(0)));
  const int m = static_cast<int>(state.range(1));
  for (auto _ : state) {
    FrobeniusChart chart(s.g, s.E, s.base, s.numerics().delta, m, options(policy, s));
    benchmark::DoNotOptimize(chart.grid_points().data());
  }
  state.counters["points"] = static_cast<double>(m * m * m);
  state.counters["threads"] = policy == ExecPolicy::serial ? 1 : omp_get_max_threads();
  state.SetLabel(s.name());
}

void leaf(benchmark::State& state, ExecPolicy policy) {
  const Scenario& s = scenario(0);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    LeafSample l = leaf_sample(s.g, s.E, s.base, s.numerics().epsilon, m, options(policy, s));
    benchmark::DoNotOptimize(l.points.data());
  }
  state.counters["points"] = static_cast<double>(m * m);
}

}  // namespace

BENCHMARK_CAPTURE(chart_grid, serial, ExecPolicy::serial)->ArgsProduct({{0, 1}, {3, 5}})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(chart_grid, openmp, ExecPolicy::openmp)->ArgsProduct({{0, 1}, {3, 5}})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(leaf, serial, ExecPolicy::serial)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(leaf, openmp, ExecPolicy::openmp)->Arg(9)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
