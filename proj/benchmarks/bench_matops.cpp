#include <benchmark/benchmark.h>

#include <random>

#include "vbm/matops.hpp"

namespace {

vbm::Matrix random_matrix(std::size_t n, double hi, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, hi);
  vbm::Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = u(gen);
  return m;
}

void BM_SpectralRadius(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(vbm::matops::spectral_radius(m));
}
BENCHMARK(BM_SpectralRadius)->DenseRange(2, 8, 2);

void BM_ConvergentToZero(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto m = random_matrix(n, 1.8 / static_cast<double>(n), 2);
  for (auto _ : state) benchmark::DoNotOptimize(vbm::matops::is_convergent_to_zero(m));
}
BENCHMARK(BM_ConvergentToZero)->DenseRange(2, 8, 2);

void BM_NeumannInverse(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto m = random_matrix(n, 1.0 / static_cast<double>(n), 3);
  for (auto _ : state) benchmark::DoNotOptimize(vbm::matops::neumann_inverse(m));
}
BENCHMARK(BM_NeumannInverse)->DenseRange(2, 8, 2);

void BM_MonotoneSampled(benchmark::State& state) {
  const vbm::Matrix m{{2, -1}, {0, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(vbm::matops::is_monotone_sampled(m, 200, 7));
}
BENCHMARK(BM_MonotoneSampled);

}  // namespace
