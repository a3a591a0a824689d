// Serial reference vs OpenMP kernels.
#include "srcomb/normal_form.hpp"
#include "srcomb/parallel.hpp"
#include "srcomb/phase_scan.hpp"

#include <benchmark/benchmark.h>

using namespace srcomb;

namespace {

// Mixed grid: fixed points, symmetric and broken cycles.
const GridSpec kGrid{0.2, 1.6, 0.05, 1.4, 6, 6};

ClassifyOptions bench_options() {
  ClassifyOptions o;
  o.probes = 3;
  o.transient = 2e3;
  o.horizon = 6e3;
  return o;
}

void BM_ScanSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(scan_serial(kGrid, bench_options()));
  st.counters["nodes"] = static_cast<double>(kGrid.size());
}

void BM_ScanParallel(benchmark::State& st) {
  const int threads = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(scan_parallel(kGrid, bench_options(), threads));
  st.counters["nodes"] = static_cast<double>(kGrid.size());
  st.counters["threads"] = threads;
}

void BM_Coexistence(benchmark::State& st) {
  CoexistenceOptions o;
  o.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(coexistence_left_boundary(0.30, o));
  st.counters["parallel"] = o.parallel;
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_ScanParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_Coexistence)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
