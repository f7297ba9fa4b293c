#include <benchmark/benchmark.h>

#include "axicd/elliptic.hpp"
#include "axicd/solver.hpp"
#include "axicd/transport.hpp"
#include "axicd/verification.hpp"

using namespace axicd;

namespace {

Geometry flat(int n) {
  return metric_coefficients(FreeBoundaryCurve::flat(2.0, n), build_reference_grid(2.0, n, n));
}

void BM_PsiFactorize(benchmark::State& st) {
  const Geometry geo = flat(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(PsiSolver(geo));
}
BENCHMARK(BM_PsiFactorize)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PsiBackSolve(benchmark::State& st) {
  const Geometry geo = flat(static_cast<int>(st.range(0)));
  const PsiSolver solver(geo);
  const Field2D src(geo.grid, AxisKind::odd, 1.0);
  const std::vector<double> robin(static_cast<std::size_t>(geo.grid.nx) + 1, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(solver.solve(src, robin));
}
BENCHMARK(BM_PsiBackSolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_StreamFunction(benchmark::State& st) {
  const Geometry geo = flat(static_cast<int>(st.range(0)));
  const Field2D q(geo.grid, AxisKind::even, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(compute_stream_h(q, geo, 0.1, Quadrature::simpson));
}
BENCHMARK(BM_StreamFunction)->Arg(64)->Arg(128);

void BM_SolveFull(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const ProblemSpec p = reference_problem(1e-3, 2.0, n, n);
  for (auto _ : st) benchmark::DoNotOptimize(solve_full(p));
}
BENCHMARK(BM_SolveFull)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
