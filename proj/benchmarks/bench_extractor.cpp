#include <benchmark/benchmark.h>

#include "rsslam/brief_pattern.hpp"
#include "rsslam/orb_extractor.hpp"
#include "synthetic.hpp"

using namespace rsslam;

namespace {

GrayImage vga_frame() {
    testsupport::BoxScene scene(3);
    const CameraIntrinsics K{517.3, 516.5, 318.6, 255.3, 5000.0};
    GrayImage gray;
    std::vector<float> depth;
    scene.render(PoseSE3::identity(), K, 640, 480, gray, depth);
    return gray;
}

} // namespace

static void BM_Smooth640x480(benchmark::State& state) {
    const GrayImage frame = vga_frame();
    for (auto _ : state) benchmark::DoNotOptimize(smooth(frame));
}
BENCHMARK(BM_Smooth640x480)->Unit(benchmark::kMillisecond);

static void BM_FastDetect640x480(benchmark::State& state) {
    const GrayImage frame = vga_frame();
    for (auto _ : state) benchmark::DoNotOptimize(detect_fast(frame, 20));
}
BENCHMARK(BM_FastDetect640x480)->Unit(benchmark::kMillisecond);

static void BM_BuildPyramid(benchmark::State& state) {
    const GrayImage frame = vga_frame();
    for (auto _ : state) benchmark::DoNotOptimize(build_pyramid(frame, 4, 1.2));
}
BENCHMARK(BM_BuildPyramid)->Unit(benchmark::kMillisecond);

static void BM_Descriptor(benchmark::State& state) {
    const GrayImage smoothed = smooth(vga_frame());
    const RsBriefPattern& pattern = canonical_pattern();
    int x = 20;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_descriptor(smoothed, 20 + (x++ % 600), 240, pattern));
    }
}
BENCHMARK(BM_Descriptor);

// The full frame pipeline against the soft real-time budget.
static void BM_ExtractFrame640x480(benchmark::State& state) {
    const GrayImage frame = vga_frame();
    const ImagePyramid pyramid = build_pyramid(frame, 4, 1.2);
    const RsBriefPattern& pattern = canonical_pattern();
    for (auto _ : state) benchmark::DoNotOptimize(extract(pyramid, {}, pattern));
}
BENCHMARK(BM_ExtractFrame640x480)->Unit(benchmark::kMillisecond);

static void BM_ExtractIncludingPyramid(benchmark::State& state) {
    const GrayImage frame = vga_frame();
    const RsBriefPattern& pattern = canonical_pattern();
    for (auto _ : state) {
        const ImagePyramid pyramid = build_pyramid(frame, 4, 1.2);
        benchmark::DoNotOptimize(extract(pyramid, {}, pattern));
    }
}
BENCHMARK(BM_ExtractIncludingPyramid)->Unit(benchmark::kMillisecond);
