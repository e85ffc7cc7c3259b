#include <benchmark/benchmark.h>

#include "vbm/solver.hpp"

namespace {

using namespace vbm;

solver::ContractionProblem affine() {
  solver::ContractionProblem p;
  p.N = solver::Operator::from_expressions({"0.5*x1 + 1", "0.25*x1 + 0.5*x2 + 1"}, 2);
  p.metric = metric::componentwise_abs(2, Matrix::identity(2));
  p.A = Matrix{{0.5, 0}, {0.25, 0.5}};
  p.x0 = {0, 0};
  p.tol = {1e-12, 1e-12};
  return p;
}

void BM_PerovSolve(benchmark::State& state) {
  const auto p = affine();
  for (auto _ : state) benchmark::DoNotOptimize(solver::perov_solve(p));
}
BENCHMARK(BM_PerovSolve);

void BM_OperatorEval(benchmark::State& state) {
  const auto p = affine();
  const Vec x{1.5, -2};
  for (auto _ : state) benchmark::DoNotOptimize(p.N(x));
}
BENCHMARK(BM_OperatorEval);

void BM_Ostrowski(benchmark::State& state) {
  auto p = affine();
  p.max_iter = 60;
  const auto s = solver::Schedule::geometric(2, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(solver::ostrowski_run(p, s));
}
BENCHMARK(BM_Ostrowski);

void BM_Avramescu(benchmark::State& state) {
  solver::AvramescuProblem p;
  p.N1 = solver::Operator::from_expressions({"0.5*x1 + y1"}, 1, 1);
  p.N2 = solver::Operator::from_expressions({"0.25*x1"}, 1, 1);
  p.metric = metric::componentwise_abs(1, Matrix::identity(1));
  p.A = Matrix{{0.5}};
  p.x0 = {0};
  p.dbox = {{0.0, 1.0}};
  p.inner_tol = {1e-12};
  p.samples = 100;
  for (auto _ : state) benchmark::DoNotOptimize(solver::avramescu_solve(p));
}
BENCHMARK(BM_Avramescu)->Unit(benchmark::kMillisecond);

}  // namespace
