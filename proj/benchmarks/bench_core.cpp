#include "frem/datagen.hpp"
#include "frem/estimator.hpp"
#include "frem/intrinsic_dim.hpp"
#include "frem/recovery.hpp"
#include "frem/tangent.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace frem;

namespace {

DiscreteObservations
noisy_sine(std::size_t m)
{
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 0.35);
  DiscreteObservations obs;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(m - 1);
    obs.times.push_back(t);
    obs.values.push_back(std::sin(2 * std::numbers::pi * t) + z(rng));
  }
  return obs;
}

void
BM_RecoverCurve(benchmark::State& state)
{
  const auto obs = noisy_sine(static_cast<std::size_t>(state.range(0)));
  const auto grid = default_grid();
  for (auto _ : state)
    benchmark::DoNotOptimize(recover_curve(obs, grid));
}
BENCHMARK(BM_RecoverCurve)->Arg(50)->Arg(100)->Arg(400);

void
BM_EstimateDim(benchmark::State& state)
{
  const auto s = gen_klein(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_dim(s.curves));
}
BENCHMARK(BM_EstimateDim)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void
BM_EstimateTangent(benchmark::State& state)
{
  const auto s = normalize_scale(gen_klein(static_cast<std::size_t>(state.range(0)), 3));
  const auto x = s.curves.curve(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_tangent(x, s.curves, 2, 0.5));
}
BENCHMARK(BM_EstimateTangent)->Arg(250)->Arg(1000);

void
BM_FitLocal(benchmark::State& state)
{
  const auto s = normalize_scale(gen_klein(static_cast<std::size_t>(state.range(0)), 4));
  FremModel m;
  m.curves = s.curves;
  m.responses = draw_responses(s.curves, 2.0, 5).observed;
  m.dim.raw = 2.0;
  m.dim.rounded = 2;
  m.h_pca = 0.5;
  m.h_reg = 0.45;
  const auto x = normalize_scale(gen_klein(1, 6)).curves.curve(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_local(m, x));
}
BENCHMARK(BM_FitLocal)->Arg(250)->Arg(1000);

void
BM_FitFrem(benchmark::State& state)
{
  const auto s = normalize_scale(gen_klein(static_cast<std::size_t>(state.range(0)), 7));
  const auto y = draw_responses(s.curves, 2.0, 8).observed;
  FremOptions opts;
  opts.bandwidth_count = 4;
  for (auto _ : state)
    benchmark::DoNotOptimize(fit_frem(s.curves, y, opts));
}
BENCHMARK(BM_FitFrem)->Arg(250)->Unit(benchmark::kMillisecond)->Iterations(1);

} // namespace

BENCHMARK_MAIN();
