#include "rsslam/pose_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace rsslam {

double reprojection_error(const PoseSE3& pose, const CameraIntrinsics& K,
                          const std::vector<Correspondence>& corrs) {
    if (corrs.empty())
        throw std::invalid_argument("reprojection_error: empty correspondence list");
    double error = 0.0;
    for (const auto& c : corrs) {
        const Eigen::Vector3d pc = pose * c.world_point;
        if (pc.z() <= kMinProjectionDepth) {
            error += kBehindCameraPenalty;
            continue;
        }
        const Eigen::Vector2d px(K.fx * pc.x() / pc.z() + K.cx, K.fy * pc.y() / pc.z() + K.cy);
        error += (c.pixel - px).squaredNorm();
    }
    return error;
}

namespace {

// Residual stack r_i = c_i - h(g_i, p); behind-camera rows are zeroed, which
// matches the constant penalty those points contribute to the objective.
Eigen::VectorXd residuals(const PoseSE3& pose, const CameraIntrinsics& K,
                          const std::vector<Correspondence>& corrs) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * corrs.size());
    for (std::size_t i = 0; i < corrs.size(); ++i) {
        const Eigen::Vector3d pc = pose * corrs[i].world_point;
        if (pc.z() <= kMinProjectionDepth) continue;
        r[2 * i] = corrs[i].pixel.x() - (K.fx * pc.x() / pc.z() + K.cx);
        r[2 * i + 1] = corrs[i].pixel.y() - (K.fy * pc.y() / pc.z() + K.cy);
    }
    return r;
}

} // namespace

Eigen::MatrixXd reprojection_jacobian(const PoseSE3& pose, const CameraIntrinsics& K,
                                      const std::vector<Correspondence>& corrs) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * corrs.size(), 6);
    for (std::size_t i = 0; i < corrs.size(); ++i) {
        const Eigen::Vector3d pc = pose * corrs[i].world_point;
        if (pc.z() <= kMinProjectionDepth) continue;
        const double z_inv = 1.0 / pc.z();
        const double z_inv2 = z_inv * z_inv;
        Eigen::Matrix<double, 2, 3> proj;
        proj << K.fx * z_inv, 0.0, -K.fx * pc.x() * z_inv2, //
            0.0, K.fy * z_inv, -K.fy * pc.y() * z_inv2;
        // Left-multiplicative perturbation exp(delta) * pose:
        // d(pc)/d(dtheta) = -[pc]x, d(pc)/d(dt) = I, and r = c - proj(pc).
        jac.block<2, 3>(2 * i, 0) = proj * skew(pc);
        jac.block<2, 3>(2 * i, 3) = -proj;
    }
    return jac;
}

namespace {

constexpr double kLambdaInit = 1e-3;
constexpr double kLambdaMax = 1e8;
constexpr double kRelativeDecrease = 1e-8;

OptimizeResult lm_minimize(const PoseSE3& initial, const CameraIntrinsics& K,
                           const std::vector<Correspondence>& corrs, int max_iterations) {
    OptimizeResult result;
    result.pose = initial;
    result.final_error = reprojection_error(initial, K, corrs);

    double lambda = kLambdaInit;
    for (int iter = 0; iter < max_iterations; ++iter) {
        result.iterations = iter + 1;
        if (result.final_error == 0.0) break;

        const Eigen::MatrixXd jac = reprojection_jacobian(result.pose, K, corrs);
        const Eigen::VectorXd res = residuals(result.pose, K, corrs);
        const Eigen::Matrix<double, 6, 6> hessian = jac.transpose() * jac;
        const Eigen::Matrix<double, 6, 1> gradient = jac.transpose() * res;

        bool accepted = false;
        bool solver_ok = false;
        while (lambda <= kLambdaMax) {
            Eigen::Matrix<double, 6, 6> damped = hessian;
            damped.diagonal().array() += lambda;
            const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(damped);
            if (ldlt.info() != Eigen::Success) {
                lambda *= 10.0;
                continue;
            }
            const Twist delta = ldlt.solve(-gradient);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            solver_ok = true;

            const PoseSE3 candidate = se3_exp(delta) * result.pose;
            const double candidate_error = reprojection_error(candidate, K, corrs);
            if (candidate_error < result.final_error) {
                const double decrease =
                    (result.final_error - candidate_error) / result.final_error;
                result.pose = candidate;
                result.final_error = candidate_error;
                lambda /= 10.0;
                accepted = true;
                if (decrease < kRelativeDecrease) return result;
                break;
            }
            lambda *= 10.0;
        }

        if (!accepted) {
            result.stalled = !solver_ok;
            break; // either converged (no decreasing step exists) or unsolvable
        }
    }
    return result;
}

} // namespace

OptimizeResult optimize_pose(const PoseSE3& initial, const CameraIntrinsics& K,
                             const std::vector<Correspondence>& corrs, int max_iterations) {
    if (corrs.size() < 3)
        throw std::invalid_argument("optimize_pose: need at least 3 correspondences");
    return lm_minimize(initial, K, corrs, max_iterations);
}

namespace {

// Pixel distance between the observation and the projected point;
// infinity for behind-camera points.
double point_error(const PoseSE3& pose, const CameraIntrinsics& K, const Correspondence& c) {
    const Eigen::Vector3d pc = pose * c.world_point;
    if (pc.z() <= kMinProjectionDepth) return std::numeric_limits<double>::infinity();
    const Eigen::Vector2d px(K.fx * pc.x() / pc.z() + K.cx, K.fy * pc.y() / pc.z() + K.cy);
    return (c.pixel - px).norm();
}

} // namespace

PnpResult pnp_ransac(const std::vector<Correspondence>& corrs, const CameraIntrinsics& K,
                     std::uint64_t rng_seed, int iterations, double inlier_px) {
    PnpResult result;
    const int n = static_cast<int>(corrs.size());
    if (n < 4) {
        result.status = PnpStatus::InsufficientData;
        return result;
    }

    // Canonical view: sampling runs over a sorted index permutation, so the
    // outcome does not depend on the order correspondences arrive in.
    std::vector<int> order(corrs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ca = corrs[a];
        const auto& cb = corrs[b];
        const auto ta = std::make_tuple(ca.world_point.x(), ca.world_point.y(), ca.world_point.z(),
                                        ca.pixel.x(), ca.pixel.y());
        const auto tb = std::make_tuple(cb.world_point.x(), cb.world_point.y(), cb.world_point.z(),
                                        cb.pixel.x(), cb.pixel.y());
        return ta < tb;
    });

    std::mt19937_64 rng(rng_seed);
    const auto draw_index = [&] { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

    std::vector<int> best_inliers; // original indices
    PoseSE3 best_pose;
    std::vector<Correspondence> minimal(4);

    for (int iter = 0; iter < iterations; ++iter) {
        int picks[4];
        for (int i = 0; i < 4; ++i) {
            bool fresh;
            do {
                picks[i] = draw_index();
                fresh = true;
                for (int j = 0; j < i; ++j) fresh &= picks[j] != picks[i];
            } while (!fresh);
        }
        for (int i = 0; i < 4; ++i) minimal[i] = corrs[order[picks[i]]];

        const OptimizeResult fit = lm_minimize(PoseSE3::identity(), K, minimal, 40);
        if (fit.stalled) continue;

        std::vector<int> inliers;
        for (int i = 0; i < n; ++i) {
            const int original = order[i];
            if (point_error(fit.pose, K, corrs[original]) < inlier_px) inliers.push_back(original);
        }
        if (inliers.size() > best_inliers.size()) {
            best_inliers = std::move(inliers);
            best_pose = fit.pose;
        }
    }

    if (best_inliers.size() < 4) {
        result.status = PnpStatus::NoConsensus;
        return result;
    }

    // Refine over the canonical ordering (best_inliers was collected in it),
    // so the accumulation order is independent of the input permutation.
    std::vector<Correspondence> inlier_corrs;
    inlier_corrs.reserve(best_inliers.size());
    for (int idx : best_inliers) inlier_corrs.push_back(corrs[idx]);

    result.status = PnpStatus::Ok;
    result.pose = lm_minimize(best_pose, K, inlier_corrs, 20).pose;
    std::sort(best_inliers.begin(), best_inliers.end());
    result.inliers = std::move(best_inliers);
    return result;
}

} // namespace rsslam
