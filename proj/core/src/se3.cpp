#include "rsslam/se3.hpp"

#include <cmath>

namespace rsslam {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

PoseSE3 pose_from_quaternion(const Eigen::Quaterniond& q, const Eigen::Vector3d& t) {
    return {q.normalized().toRotationMatrix(), t};
}

PoseSE3 se3_exp(const Twist& twist) {
    const Eigen::Vector3d omega = twist.head<3>();
    const Eigen::Vector3d rho = twist.tail<3>();
    const double theta = omega.norm();
    const Eigen::Matrix3d w = skew(omega);
    const Eigen::Matrix3d w2 = w * w;

    Eigen::Matrix3d rotation;
    Eigen::Matrix3d v;
    if (theta < 1e-9) {
        // Second-order series; adequate well below the cutoff.
        rotation = Eigen::Matrix3d::Identity() + w + 0.5 * w2;
        v = Eigen::Matrix3d::Identity() + 0.5 * w + (1.0 / 6.0) * w2;
    } else {
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double t2 = theta * theta;
        rotation = Eigen::Matrix3d::Identity() + (s / theta) * w + ((1.0 - c) / t2) * w2;
        v = Eigen::Matrix3d::Identity() + ((1.0 - c) / t2) * w + ((theta - s) / (t2 * theta)) * w2;
    }
    return {rotation, v * rho};
}

Twist se3_log(const PoseSE3& pose) {
    // Quaternion extraction is stable for every angle including near pi.
    Eigen::Quaterniond q(pose.rotation);
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    const double vec_norm = q.vec().norm();
    const double theta = 2.0 * std::atan2(vec_norm, q.w());

    Eigen::Vector3d omega;
    if (vec_norm < 1e-12) {
        omega = 2.0 * q.vec(); // first-order: q.vec() ~ omega / 2
    } else {
        omega = (theta / vec_norm) * q.vec();
    }

    const Eigen::Matrix3d w = skew(omega);
    const Eigen::Matrix3d w2 = w * w;
    Eigen::Matrix3d v_inv;
    if (theta < 1e-5) {
        v_inv = Eigen::Matrix3d::Identity() - 0.5 * w + (1.0 / 12.0) * w2;
    } else {
        // c = (1 - theta*sin/(2*(1-cos))) / theta^2, finite on (0, pi].
        const double c =
            (1.0 - theta * std::sin(theta) / (2.0 * (1.0 - std::cos(theta)))) / (theta * theta);
        v_inv = Eigen::Matrix3d::Identity() - 0.5 * w + c * w2;
    }

    Twist twist;
    twist.head<3>() = omega;
    twist.tail<3>() = v_inv * pose.translation;
    return twist;
}

double rotation_angle(const Eigen::Matrix3d& rotation) {
    Eigen::Quaterniond q(rotation);
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    return 2.0 * std::atan2(q.vec().norm(), q.w());
}

double relative_translation(const PoseSE3& a, const PoseSE3& b) {
    return (a.center() - b.center()).norm();
}

double relative_rotation(const PoseSE3& a, const PoseSE3& b) {
    return rotation_angle(a.rotation * b.rotation.transpose());
}

} // namespace rsslam
