#include <benchmark/benchmark.h>

#include "cfmimo/channel_aging.hpp"
#include "cfmimo/experiment.hpp"
#include "cfmimo/propagation.hpp"
#include "cfmimo/zf_precoding.hpp"

using namespace cfmimo;

namespace {

Eigen::MatrixXcd random_rows(int K, int M, RandomStream& rng) {
  Eigen::MatrixXcd g(K, M);
  for (int m = 0; m < M; ++m)
    for (int k = 0; k < K; ++k) g(k, m) = rng.complex_normal();
  return g;
}

void BM_BesselJ0(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j0(x));
    x = x < 50.0 ? x + 0.173 : 0.0;
  }
}
BENCHMARK(BM_BesselJ0);

void BM_ZfPrecode(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0)), M = static_cast<int>(state.range(1));
  RandomStream rng(1);
  const Eigen::MatrixXcd g = random_rows(K, M, rng);
  const Eigen::VectorXd eta = Eigen::VectorXd::Constant(K, 1e-3);
  const Eigen::VectorXcd s = random_rows(K, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(zf_precode(g, eta, s));
}
BENCHMARK(BM_ZfPrecode)->Args({2, 8})->Args({16, 128});

void BM_DrawLargeScale(benchmark::State& state) {
  const SystemConfig config;
  RandomStream rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(draw_large_scale(config, rng));
}
BENCHMARK(BM_DrawLargeScale);

// One drop's inner ensemble at the reference size (16 x 128).
void BM_Expectations(benchmark::State& state) {
  const SystemConfig config;
  RandomStream rng(3);
  const Eigen::MatrixXd beta = draw_large_scale(config, rng).beta;
  const ExpectationOptions opts{static_cast<std::size_t>(state.range(0)), 1, 32};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_expectations(beta, beta, opts, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Expectations)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BenchmarkDrop(benchmark::State& state) {
  const SystemConfig config;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const ScenarioSpec spec{"benchmark", {0.0}, {0.0}, CsiMode::benchmark, 1, 200, ++seed};
    benchmark::DoNotOptimize(run_experiment(config, {spec}));
  }
}
BENCHMARK(BM_BenchmarkDrop)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
