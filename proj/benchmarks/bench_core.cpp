#include <benchmark/benchmark.h>

#include "oneshot/conic.hpp"
#include "oneshot/distance.hpp"
#include "oneshot/entropy.hpp"
#include "oneshot/maxinfo.hpp"

using namespace oneshot;

namespace {

DensityOperator state(int da, int db, std::uint64_t seed = 5) {
  return random_density(DimPair{da, db}, seed, StateKind::GinibreMixed);
}

}  // namespace

static void BM_EigHermitian(benchmark::State& st) {
  const DensityOperator rho = state(static_cast<int>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(eig_hermitian(rho.op()));
}
BENCHMARK(BM_EigHermitian)->Arg(4)->Arg(16)->Arg(64);

static void BM_Dmax(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const DensityOperator a = state(d, 1, 1), b = state(d, 1, 2);
  for (auto _ : st) benchmark::DoNotOptimize(dmax(a, b));
}
BENCHMARK(BM_Dmax)->Arg(2)->Arg(6)->Arg(16);

static void BM_Fidelity(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const DensityOperator a = state(d, 1, 1), b = state(d, 1, 2);
  for (auto _ : st) benchmark::DoNotOptimize(fidelity(a, b));
}
BENCHMARK(BM_Fidelity)->Arg(2)->Arg(6)->Arg(16);

static void BM_ConicSolve(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const DensityOperator rho = state(d, d);
  const HermitianOperator c = rho.marginal(Subsystem::A).op();
  for (auto _ : st) benchmark::DoNotOptimize(min_trace_dominating(c, rho));
}
BENCHMARK(BM_ConicSolve)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_HminCond(benchmark::State& st) {
  const DensityOperator rho = state(3, 3);
  for (auto _ : st) benchmark::DoNotOptimize(hmin_cond(rho));
}
BENCHMARK(BM_HminCond)->Unit(benchmark::kMillisecond);

static void BM_Imax3(benchmark::State& st) {
  const DensityOperator rho = state(static_cast<int>(st.range(0)), 2);
  Imax3Config cfg;
  cfg.restarts = 2;
  for (auto _ : st) benchmark::DoNotOptimize(imax3(rho, cfg));
}
BENCHMARK(BM_Imax3)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_Thm1Check(benchmark::State& st) {
  const DensityOperator rho = state(3, 2);
  for (auto _ : st) benchmark::DoNotOptimize(check_theorem("thm1", rho, 0.1, 0.0));
}
BENCHMARK(BM_Thm1Check)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
