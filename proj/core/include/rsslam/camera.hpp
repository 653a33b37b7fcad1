#pragma once

#include <optional>

#include <Eigen/Core>

#include "rsslam/se3.hpp"

namespace rsslam {

/// Pinhole camera intrinsics. depth_scale is the number of raw depth units
/// per meter (5000 for TUM 16-bit depth images).
struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    double depth_scale = 5000.0;
};

inline constexpr double kMinProjectionDepth = 1e-9;

/// Projects a camera-frame point: (fx * x / z + cx, fy * y / z + cy).
/// Returns nullopt when the point is behind the camera (z <= 1e-9).
inline std::optional<Eigen::Vector2d> project_camera_point(const CameraIntrinsics& K,
                                                           const Eigen::Vector3d& camera_point) {
    if (camera_point.z() <= kMinProjectionDepth) return std::nullopt;
    return Eigen::Vector2d(K.fx * camera_point.x() / camera_point.z() + K.cx,
                           K.fy * camera_point.y() / camera_point.z() + K.cy);
}

/// Projects a world point through pose and intrinsics. Returns nullopt when
/// the point is behind the camera.
inline std::optional<Eigen::Vector2d> project(const PoseSE3& pose, const CameraIntrinsics& K,
                                              const Eigen::Vector3d& world_point) {
    return project_camera_point(K, pose * world_point);
}

/// Camera-frame point for a pixel with known depth (meters).
inline Eigen::Vector3d back_project(const CameraIntrinsics& K, const Eigen::Vector2d& pixel,
                                    double depth) {
    return {(pixel.x() - K.cx) / K.fx * depth, (pixel.y() - K.cy) / K.fy * depth, depth};
}

} // namespace rsslam
