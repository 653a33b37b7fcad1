#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace rsslam {

/// Twist vector for SE(3): rotation part first, translation part last.
using Twist = Eigen::Matrix<double, 6, 1>;

/// Rigid transform. Used both as a camera pose (world -> camera: maps world
/// points into the camera frame) and as a plain rigid alignment transform.
struct PoseSE3 {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static PoseSE3 identity() { return {}; }

    Eigen::Vector3d operator*(const Eigen::Vector3d& p) const { return rotation * p + translation; }

    /// Composition: (a * b)(x) = a(b(x)).
    PoseSE3 operator*(const PoseSE3& other) const {
        return {rotation * other.rotation, rotation * other.translation + translation};
    }

    PoseSE3 inverse() const {
        return {rotation.transpose(), -(rotation.transpose() * translation)};
    }

    /// Camera center in world coordinates for a world -> camera pose.
    Eigen::Vector3d center() const { return -(rotation.transpose() * translation); }
};

PoseSE3 pose_from_quaternion(const Eigen::Quaterniond& q, const Eigen::Vector3d& t);

/// Exponential map: twist (rotation vector, translation vector) to pose.
PoseSE3 se3_exp(const Twist& twist);

/// Logarithm map, inverse of se3_exp for rotation angles < pi. Stable at and
/// near pi via quaternion extraction.
Twist se3_log(const PoseSE3& pose);

/// Rotation angle of R in [0, pi].
double rotation_angle(const Eigen::Matrix3d& rotation);

/// Relative motion between two world -> camera poses: distance between the
/// camera centers and angle between the orientations.
double relative_translation(const PoseSE3& a, const PoseSE3& b);
double relative_rotation(const PoseSE3& a, const PoseSE3& b);

/// Hat operator: the skew-symmetric matrix of a 3-vector.
Eigen::Matrix3d skew(const Eigen::Vector3d& v);

} // namespace rsslam
