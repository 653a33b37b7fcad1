#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "rsslam/camera.hpp"
#include "rsslam/se3.hpp"

namespace rsslam {

/// 3D point / pixel observation pair.
struct Correspondence {
    Eigen::Vector3d world_point = Eigen::Vector3d::Zero();
    Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
};

/// Squared-pixel penalty charged to a correspondence whose point falls behind
/// the camera, so the objective stays defined along the whole step path.
inline constexpr double kBehindCameraPenalty = 1e4;

/// Sum of squared reprojection residuals over the correspondences.
/// Non-projecting points contribute kBehindCameraPenalty each.
/// Throws std::invalid_argument on an empty list.
double reprojection_error(const PoseSE3& pose, const CameraIntrinsics& K,
                          const std::vector<Correspondence>& corrs);

struct OptimizeResult {
    PoseSE3 pose;
    double final_error = 0.0;
    bool stalled = false; // normal equations unsolvable at every damping level
    int iterations = 0;
};

/// Levenberg-Marquardt minimization of the reprojection error over the
/// 6-dim twist, with left-multiplicative updates exp(delta) * pose. Damping
/// starts at 1e-3, grows 10x on a rejected step and shrinks 10x on an
/// accepted one. Stops after max_iterations steps or when an accepted step
/// improves the error by a relative factor below 1e-8. The returned error
/// never exceeds the initial one.
OptimizeResult optimize_pose(const PoseSE3& initial, const CameraIntrinsics& K,
                             const std::vector<Correspondence>& corrs,
                             int max_iterations = 20);

/// Analytic 2n x 6 Jacobian of the residual stack r_i = c_i - h(g_i, p) with
/// respect to the left-multiplicative twist at pose. Rows for behind-camera
/// points are zero. Exposed for the finite-difference oracle.
Eigen::MatrixXd reprojection_jacobian(const PoseSE3& pose, const CameraIntrinsics& K,
                                      const std::vector<Correspondence>& corrs);

enum class PnpStatus {
    Ok,
    InsufficientData, // fewer than 4 correspondences
    NoConsensus,      // no hypothesis reached 4 inliers; caller treats as tracking loss
};

struct PnpResult {
    PnpStatus status = PnpStatus::NoConsensus;
    PoseSE3 pose;
    std::vector<int> inliers; // indices into the input correspondence list
};

/// RANSAC over 4-point minimal samples. Each hypothesis pose is fit by a
/// damped Gauss-Newton solve started at identity, so the solver expects
/// frame-relative motion (the pipeline hands it correspondences expressed in
/// the previous camera frame). Inliers are points with reprojection distance
/// below inlier_px; the best hypothesis is refined on its inlier set.
/// Sampling is drawn from a generator seeded with rng_seed over a canonically
/// sorted view of the input, so the result is reproducible and independent of
/// input order.
PnpResult pnp_ransac(const std::vector<Correspondence>& corrs, const CameraIntrinsics& K,
                     std::uint64_t rng_seed, int iterations = 100, double inlier_px = 3.0);

} // namespace rsslam
