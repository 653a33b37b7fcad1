#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rsslam/se3.hpp"
#include "rsslam/trajectory.hpp"

namespace rsslam {

/// Index pairs (est, gt) of samples whose timestamps agree within the window,
/// greedily matched by smallest difference, each sample used at most once.
std::vector<std::pair<int, int>> associate_trajectories(const Trajectory& est, const Trajectory& gt,
                                                        double window = 0.02);

/// Least-squares rigid transform S (rotation + translation, no scale)
/// minimizing sum ||gt_i - S(est_i)||^2 over the associated position pairs.
/// Solved via SVD of the cross-covariance with determinant sign correction.
/// Throws std::runtime_error with fewer than 3 associated pairs.
PoseSE3 align_umeyama(const Trajectory& est, const Trajectory& gt, double window = 0.02);

/// RMSE of translational residuals after rigid alignment, in meters.
double ate_rmse(const Trajectory& est, const Trajectory& gt, double window = 0.02);

/// Standalone SVG overlaying the estimated and ground-truth world XY paths,
/// with a legend and an axis scale bar. One polyline per non-empty
/// trajectory. Throws std::runtime_error when the path is not writable.
void plot_trajectory(const Trajectory& est, const Trajectory& gt, const std::string& path);

} // namespace rsslam
