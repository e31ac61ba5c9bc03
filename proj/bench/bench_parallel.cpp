// Serial reference path versus the OpenMP path on the heaviest suites.

#include <benchmark/benchmark.h>

#include "qcalc/clifford.hpp"
#include "qcalc/covariant.hpp"
#include "qcalc/nilpotency.hpp"

using namespace qcalc;

namespace {

Execution exec_of(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

void BM_dN_zero(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(verify_dN_zero(4, 2, 16, 1, 4, exec_of(s)));
}

void BM_clifford_verify(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(verify_clifford(3, 3, exec_of(s)));
}

void BM_curvature(benchmark::State& s) {
  const auto A = random_connection(3, 3, 5);
  for (auto _ : s) benchmark::DoNotOptimize(verify_curvature(A, exec_of(s)));
}

void BM_tensoriality(benchmark::State& s) {
  const auto b = random_bundle(3, 5, 1);
  const auto chart = standard_chart("shear", 3);
  for (auto _ : s) benchmark::DoNotOptimize(verify_tensoriality(b, chart, exec_of(s)));
}

}  // namespace

BENCHMARK(BM_dN_zero)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_clifford_verify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_curvature)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_tensoriality)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
