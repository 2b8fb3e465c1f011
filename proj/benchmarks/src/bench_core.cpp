#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "thermoforge/approx.hpp"
#include "thermoforge/cltsim.hpp"
#include "thermoforge/germfit.hpp"
#include "thermoforge/pressure.hpp"

using namespace thermoforge;

namespace {

CylinderPotential random_potential(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> c(n);
  for (double& v : c) v = u(rng);
  return CylinderPotential::level0(std::move(c));
}

void BM_Pressure(benchmark::State& state) {
  const auto pot = random_potential(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pressure(pot, 0.7));
}
BENCHMARK(BM_Pressure)->RangeMultiplier(8)->Range(2, 1 << 15);

void BM_PressureJet(benchmark::State& state) {
  const auto pot = random_potential(64);
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pressure_jet(pot, 0.7, order));
}
BENCHMARK(BM_PressureJet)->DenseRange(2, 10, 2);

void BM_FiniteDifferenceJet(benchmark::State& state) {
  const auto pot = random_potential(64);
  for (auto _ : state) benchmark::DoNotOptimize(finite_difference_jet(pot, 0.7, 4));
}
BENCHMARK(BM_FiniteDifferenceJet);

void BM_FitLevel1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double lo = 2.0 - std::log(static_cast<double>(n));
  const Germ g(1.0, 2.0, lo + 0.4 * (2.0 - lo));
  for (auto _ : state) benchmark::DoNotOptimize(fit_level1(g, n));
}
BENCHMARK(BM_FitLevel1)->RangeMultiplier(10)->Range(10, 10000);

void BM_FitLevel2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Germ g(1.0, 2.0, 1.0);
  const A2Range range = feasible_a2_range(g, n);
  const Germ g2(1.0, 2.0, 1.0, 0.5 * (range.lo + range.hi));
  for (auto _ : state) benchmark::DoNotOptimize(fit_level2(g2, n));
}
BENCHMARK(BM_FitLevel2)->Arg(10)->Arg(100);

void BM_Table3Row(benchmark::State& state) {
  const double n = std::pow(10.0, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(table3_solve(n));
}
BENCHMARK(BM_Table3Row)->Arg(1)->Arg(10)->Arg(40);

void BM_ConvergenceStudy(benchmark::State& state) {
  const DecayingPotentialSpec spec(2, 0.5, {{0.0, 1.0}});
  const std::vector<std::size_t> windows = {2, 4, 6, 8, 10};
  for (auto _ : state) benchmark::DoNotOptimize(convergence_study(spec, 1.0, windows));
}
BENCHMARK(BM_ConvergenceStudy);

void BM_CltSimulation(benchmark::State& state) {
  const auto pot = CylinderPotential::level0({-0.5, 0.5});
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_gm({pot, 0.0, {1000}, 20000, 1, 1}));
  }
}
BENCHMARK(BM_CltSimulation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
