#include <benchmark/benchmark.h>

#include <random>

#include "qode/carleman.hpp"
#include "qode/instances.hpp"
#include "qode/linalg.hpp"
#include "qode/spectral_bounds.hpp"
#include "qode/taylor_system.hpp"

namespace {

using namespace qode;

SolverParams params_for(const CMatrix& a, Index m, int k) {
  SolverParams p;
  p.m = p.p = m;
  p.k = k;
  p.h = 1.0 / op_norm(a);
  p.delta = 1e-3;
  return p;
}

void BM_MatExp(benchmark::State& st) {
  const CMatrix a = twisted_toeplitz(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(mat_exp(a, 3.0));
}
BENCHMARK(BM_MatExp)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_BuildL(benchmark::State& st) {
  const CMatrix a = twisted_toeplitz(st.range(0));
  const MatrixHandle h(a);
  const SolverParams p = params_for(a, 6, 4);
  for (auto _ : st) benchmark::DoNotOptimize(build_L(h, p));
}
BENCHMARK(BM_BuildL)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_SolveL(benchmark::State& st) {
  const CMatrix a = twisted_toeplitz(st.range(0));
  const SolverParams p = params_for(a, 6, 4);
  const TaylorSystem sys = assemble_system(MatrixHandle(a), CVector::Ones(a.rows()), CVector::Zero(a.rows()), p);
  for (auto _ : st) benchmark::DoNotOptimize(sys.L.solve(sys.psi.psi));
}
BENCHMARK(BM_SolveL)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_KappaL(benchmark::State& st) {
  const CMatrix a = twisted_toeplitz(st.range(0));
  const TaylorOperator l = build_L(MatrixHandle(a), params_for(a, 6, 4));
  for (auto _ : st) benchmark::DoNotOptimize(kappa_of_system(l).kappa);
}
BENCHMARK(BM_KappaL)->Arg(10)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_EigvecCondition(benchmark::State& st) {
  const CMatrix a = twisted_toeplitz(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(eigvec_condition(a).kappa);
}
BENCHMARK(BM_EigvecCondition)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CofA(benchmark::State& st) {
  std::mt19937_64 rng(3);
  const CMatrix a = random_stable_matrix(rng, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(c_of_a(a, 10.0).value);
}
BENCHMARK(BM_CofA)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CarlemanAssembly(benchmark::State& st) {
  const QuadraticODE ode = rescale(coupled_benchmark()).ode;
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_carleman(ode, n).delta);
  st.counters["Delta"] = static_cast<double>(carleman_dimension(2, n));
}
BENCHMARK(BM_CarlemanAssembly)->Arg(4)->Arg(8)->Arg(11)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
