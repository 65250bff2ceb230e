#include <benchmark/benchmark.h>

#include "semirel/exact.hpp"
#include "semirel/spectrum.hpp"

using namespace semirel;

namespace {

const Potential kWell = Potential::harmonic(1.0);

void BM_TotalPhase(benchmark::State& state) {
  const auto mode = state.range(0) ? EquationMode::wp : EquationMode::nr;
  const auto s = TwoBodySystem::from_reduced(1.0, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(total_phase(mode, s, kWell, 6.0, {}));
}
BENCHMARK(BM_TotalPhase)->Arg(0)->Arg(1);

void BM_SolveLevel(benchmark::State& state) {
  const auto s = TwoBodySystem::from_reduced(5.0, 10.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_level(EquationMode::wp, s, kWell, n, {}));
}
BENCHMARK(BM_SolveLevel)->Arg(0)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SturmEigenvalue(benchmark::State& state) {
  const auto s = TwoBodySystem::from_reduced(1.0, 2.0);
  const MomentumGrid grid(initial_momentum_extent(s, 1.0, 20), static_cast<std::size_t>(state.range(0)));
  const auto t = build_momentum_hamiltonian(s, 1.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(tridiagonal_eigenvalue(t, 20));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SturmEigenvalue)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_ExactLevels(benchmark::State& state) {
  const auto s = TwoBodySystem::from_reduced(1.0, 2.0);
  const std::vector<int> levels{0, 10, 20};
  ExactOptions opt;
  opt.accuracy = 1e-5;
  for (auto _ : state) benchmark::DoNotOptimize(exact_salpeter_levels(s, 1.0, levels, opt));
}
BENCHMARK(BM_ExactLevels)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
BENCHMARK_MAIN();
