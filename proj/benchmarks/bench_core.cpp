#include <benchmark/benchmark.h>

#include "dualk/dualk.hpp"

using namespace dualk;

namespace {

DataMatrix circle(Index n, double noise = 0.5) { return generate({Circle{10.0}, n, noise, 1}).points; }

void BM_KernelMatrix(benchmark::State& state) {
  const auto x = circle(state.range(0));
  const auto spec = KernelSpec::inhomogeneous(3);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_matrix(spec, x, x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KernelMatrix)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_ThresholdedSvd(benchmark::State& state) {
  const auto x = circle(state.range(0));
  const Matrix k = kernel_matrix(KernelSpec::inhomogeneous(2), x, x);
  for (auto _ : state) benchmark::DoNotOptimize(thresholded_svd(k, 1.0));
}
BENCHMARK(BM_ThresholdedSvd)->RangeMultiplier(2)->Range(64, 512);

void BM_AvicaFit(benchmark::State& state) {
  const auto x = circle(state.range(0), 1.1);
  AvicaOptions o;
  o.max_degree = static_cast<int>(state.range(1));
  o.epsilon = circle_threshold(kDefaultTheta, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(avica_fit(x, KernelSpec::inhomogeneous(1), o));
}
BENCHMARK(BM_AvicaFit)->ArgsProduct({{100, 200, 400}, {2, 4}})->Unit(benchmark::kMillisecond);

void BM_AvicaEval(benchmark::State& state) {
  const auto x = circle(200, 1.1);
  AvicaOptions o;
  o.max_degree = 3;
  o.epsilon = circle_threshold(kDefaultTheta, 1.1);
  const auto model = avica_fit(x, KernelSpec::inhomogeneous(1), o);
  const auto probe = circle(state.range(0), 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(avica_eval(model, probe));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AvicaEval)->RangeMultiplier(4)->Range(16, 4096);

}  // namespace

BENCHMARK_MAIN();
