#include "osc3/oracle.hpp"
#include "osc3/pipeline.hpp"
#include "osc3/scenario.hpp"

#include <benchmark/benchmark.h>

namespace {

const osc3::NormalModeDynamics& fig1() {
  static const osc3::NormalModeDynamics dyn(osc3::builtin_scenario("fig1").schedule, 5.0);
  return dyn;
}

void BM_Decompose(benchmark::State& state) {
  const osc3::CouplingsAt c{0.0, 4.0, 1.0, 3.0, 8.0};
  for (auto _ : state) benchmark::DoNotOptimize(osc3::decompose(c));
}
BENCHMARK(BM_Decompose);

void BM_EvaluateSample(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(osc3::evaluate(fig1(), t));
    t = t < 5.0 ? t + 0.01 : 0.0;
  }
}
BENCHMARK(BM_EvaluateSample);

void BM_GenericMarginalization(benchmark::State& state) {
  const auto s = osc3::evaluate(fig1(), 2.5);
  for (auto _ : state) benchmark::DoNotOptimize(osc3::marginalize_to_two(s.kernel, 2, 3));
}
BENCHMARK(BM_GenericMarginalization);

void BM_SolveOde(benchmark::State& state) {
  const auto p = osc3::ModeProfile::quench(22.2, 23.4);
  for (auto _ : state) benchmark::DoNotOptimize(osc3::solve_ode(p, 5.0));
}
BENCHMARK(BM_SolveOde)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  auto c = osc3::builtin_scenario("fig2");
  c.t_end = 5.0;
  c.samples = 500;
  for (auto _ : state) benchmark::DoNotOptimize(osc3::run_sweep(c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Grid1d(benchmark::State& state) {
  const auto s = osc3::evaluate(fig1(), 2.5);
  const auto g = osc3::GridSpec::for_kernel(s.kernel_c);
  for (auto _ : state) benchmark::DoNotOptimize(osc3::spectrum_grid_1d(s.kernel_c, g));
}
BENCHMARK(BM_Grid1d)->Unit(benchmark::kMillisecond);

void BM_Grid2d(benchmark::State& state) {
  const auto s = osc3::evaluate(fig1(), 2.5);
  const auto g = osc3::GridSpec::for_kernel(s.kernel_bc);
  for (auto _ : state) benchmark::DoNotOptimize(osc3::spectrum_grid_2d(s.kernel_bc, g));
}
BENCHMARK(BM_Grid2d)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
