#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rsslam/pose_estimation.hpp"

using namespace rsslam;

namespace {

const CameraIntrinsics kFr1{517.3, 516.5, 318.6, 255.3, 5000.0};

std::vector<Correspondence> make_corrs(int n, const PoseSE3& pose, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(40.0, 600.0), uy(40.0, 440.0), uz(0.8, 4.0);
    const PoseSE3 camera_to_world = pose.inverse();
    std::vector<Correspondence> corrs;
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d pixel(ux(rng), uy(rng));
        corrs.push_back({camera_to_world * back_project(kFr1, pixel, uz(rng)), pixel});
    }
    return corrs;
}

PoseSE3 small_pose() {
    Twist twist;
    twist << 0.04, -0.03, 0.02, 0.08, -0.05, 0.02;
    return se3_exp(twist);
}

} // namespace

static void BM_ReprojectionError(benchmark::State& state) {
    const PoseSE3 pose = small_pose();
    const auto corrs = make_corrs(512, pose, 1);
    for (auto _ : state) benchmark::DoNotOptimize(reprojection_error(pose, kFr1, corrs));
}
BENCHMARK(BM_ReprojectionError);

static void BM_OptimizePose(benchmark::State& state) {
    const PoseSE3 pose = small_pose();
    const auto corrs = make_corrs(static_cast<int>(state.range(0)), pose, 2);
    Twist nudge;
    nudge << 0.02, 0.01, -0.02, 0.03, 0.02, -0.01;
    const PoseSE3 start = se3_exp(nudge) * pose;
    for (auto _ : state) benchmark::DoNotOptimize(optimize_pose(start, kFr1, corrs));
}
BENCHMARK(BM_OptimizePose)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_PnpRansac(benchmark::State& state) {
    const PoseSE3 pose = small_pose();
    auto corrs = make_corrs(static_cast<int>(state.range(0)), pose, 3);
    // a third of the observations are wrong, as after a hard matching frame
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ux(0.0, 640.0), uy(0.0, 480.0);
    for (std::size_t i = 0; i < corrs.size() / 3; ++i) corrs[i].pixel = {ux(rng), uy(rng)};
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(pnp_ransac(corrs, kFr1, seed++));
}
BENCHMARK(BM_PnpRansac)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
