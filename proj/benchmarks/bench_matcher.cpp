#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rsslam/matcher.hpp"

using namespace rsslam;

namespace {

std::vector<Descriptor256> random_descriptors(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Descriptor256> out(n);
    for (auto& d : out)
        for (auto& b : d.bytes) b = static_cast<std::uint8_t>(rng());
    return out;
}

} // namespace

static void BM_Hamming(benchmark::State& state) {
    const auto descs = random_descriptors(2, 1);
    for (auto _ : state) benchmark::DoNotOptimize(hamming(descs[0], descs[1]));
}
BENCHMARK(BM_Hamming);

// Frame (1024) against a growing map, the per-frame matching workload.
static void BM_Match(benchmark::State& state) {
    const auto frame = random_descriptors(1024, 2);
    const auto map_desc = random_descriptors(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(match(frame, map_desc, 64));
    state.SetItemsProcessed(state.iterations() * frame.size() * map_desc.size());
}
BENCHMARK(BM_Match)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);
