#pragma once

// Synthetic RGB-D test fixtures: a textured box scene rendered from a moving
// camera, and a writer that lays the rendering out as a TUM-format dataset
// directory (rgb/, depth/, rgb.txt, depth.txt, groundtruth.txt).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rsslam/camera.hpp"
#include "rsslam/image.hpp"
#include "rsslam/se3.hpp"
#include "rsslam/trajectory.hpp"

namespace rsslam::testsupport {

/// Three walls and a floor carrying a deterministic two-octave block texture:
/// sharp intensity edges every few centimeters, so corners and distinctive
/// binary descriptors exist everywhere.
class BoxScene {
public:
    explicit BoxScene(std::uint64_t seed = 1);

    /// Renders the world -> camera view. Depth (meters) is the camera-frame z
    /// of the hit; pixels that miss every plane get intensity 8 and depth 0.
    void render(const PoseSE3& pose_wc, const CameraIntrinsics& K, int width, int height,
                GrayImage& gray, std::vector<float>& depth) const;

private:
    struct Plane {
        Eigen::Vector3d origin;
        Eigen::Vector3d normal;
        Eigen::Vector3d u_axis;
        Eigen::Vector3d v_axis;
        double extent;
        int id;
    };
    std::uint8_t texture(int plane_id, double u, double v) const;

    std::vector<Plane> planes_;
    std::uint64_t seed_;
};

/// Smooth wiggling camera path (small translation + small yaw/pitch), similar
/// in spirit to a handheld sensor hovering in place. Returns world -> camera.
PoseSE3 wiggle_pose(double t);

/// Renders frames along wiggle_pose and writes a TUM-format directory.
/// Depth timestamps are offset by +5 ms from the rgb timestamps to exercise
/// the association window. Returns the ground-truth trajectory (camera ->
/// world at the rgb timestamps).
Trajectory write_tum_sequence(const std::string& dir, const BoxScene& scene,
                              const CameraIntrinsics& K, int width, int height, int n_frames,
                              double fps = 30.0);

/// Uniform-noise image, deterministic in the seed.
GrayImage random_image(int width, int height, std::uint64_t seed);

} // namespace rsslam::testsupport
