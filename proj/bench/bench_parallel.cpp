// Serial reference kernels against their OpenMP counterparts.
//
//   ./harq_bench --benchmark_filter=Estimate
//
// Thread counts are the benchmark argument; 0 means the serial kernel.

#include <benchmark/benchmark.h>

#include <vector>

#include "harq/monte_carlo.hpp"
#include "harq/optimizer.hpp"

namespace {

const harq::SystemConfig kCfg = harq::SystemConfig::from_snr_db(1.0, 3.0);
constexpr std::uint64_t kTrials = 1'000'000;

void BM_Estimate(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const harq::McReport r =
        workers == 0
            ? harq::estimate_serial(harq::Protocol::MultiLayer, {0.6, 0.4}, kCfg, kTrials, 1)
            : harq::estimate(harq::Protocol::MultiLayer, {0.6, 0.4}, kCfg, kTrials, 1, workers);
    benchmark::DoNotOptimize(r.throughput_mlh.mean);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kTrials));
}

void BM_GridArgmax(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  const std::vector<double> axis = harq::detail::unit_grid(0.02);
  for (auto _ : state) {
    const harq::Candidate c =
        workers == 0
            ? harq::grid_argmax_serial(harq::Protocol::MultiLayer, kCfg, axis, axis, {})
            : harq::grid_argmax(harq::Protocol::MultiLayer, kCfg, axis, axis, {}, workers);
    benchmark::DoNotOptimize(c.value);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(axis.size() * axis.size()));
}

}  // namespace

BENCHMARK(BM_Estimate)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridArgmax)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
