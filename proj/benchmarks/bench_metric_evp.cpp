#include <benchmark/benchmark.h>

#include <random>

#include "vbm/evp.hpp"
#include "vbm/metric.hpp"

namespace {

using namespace vbm;

void BM_VerifyAxioms(benchmark::State& state) {
  const auto pts = metric::sample_box(2, static_cast<std::size_t>(state.range(0)), -10, 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(metric::verify_axioms(metric::example1(), pts));
}
BENCHMARK(BM_VerifyAxioms)->Arg(10)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RandomTriples(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(metric::verify_random_triples(metric::example1(), 10000, -10, 10, 3));
}
BENCHMARK(BM_RandomTriples)->Unit(benchmark::kMillisecond);

void BM_EkelandWeak(benchmark::State& state) {
  const std::size_t np = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<Vec> pts, f;
  for (std::size_t i = 0; i < np; ++i) {
    pts.push_back({u(gen)});
    f.push_back({u(gen)});
  }
  const auto space = evp::FiniteSpace::from_metric(metric::componentwise_abs(1, Matrix{{1}}), pts);
  std::size_t top = 0;
  for (std::size_t i = 1; i < np; ++i)
    if (f[i][0] > f[top][0]) top = i;
  for (auto _ : state) benchmark::DoNotOptimize(evp::ekeland_weak(space, f, top));
}
BENCHMARK(BM_EkelandWeak)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
