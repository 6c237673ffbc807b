#include <benchmark/benchmark.h>

#include "unsharp/experiment.hpp"
#include "unsharp/protocol.hpp"

using namespace unsharp;

static void BM_numeric_c_scan(benchmark::State& state) {
    const EquatorialState s = make_equatorial(0.75);
    for (auto _ : state) benchmark::DoNotOptimize(numeric_c_scan(s, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_numeric_c_scan)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_unsharp_uncertainties(benchmark::State& state) {
    const EquatorialState s = make_equatorial(0.8);
    for (auto _ : state) benchmark::DoNotOptimize(unsharp_uncertainties(s, 0.7));
}
BENCHMARK(BM_unsharp_uncertainties);

static void BM_sample_coincidences(benchmark::State& state) {
    const JointProbabilities p{{0.4, 0.3, 0.2, 0.1}};
    const auto shots = static_cast<std::uint64_t>(state.range(0));
    const auto workers = static_cast<unsigned>(state.range(1));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(sample_coincidences(p, shots, seed++, {}, workers));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(shots));
}
BENCHMARK(BM_sample_coincidences)->Args({1000000, 1})->Args({1000000, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_calibrate_alpha(benchmark::State& state) {
    const int plates = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(calibrate_alpha(plates));
}
BENCHMARK(BM_calibrate_alpha)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
