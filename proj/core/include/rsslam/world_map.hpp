#pragma once

#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rsslam/camera.hpp"
#include "rsslam/descriptor.hpp"
#include "rsslam/matcher.hpp"
#include "rsslam/orb_extractor.hpp"
#include "rsslam/se3.hpp"

namespace rsslam {

/// 3D landmark with the descriptor it was created from.
struct MapPoint {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Descriptor256 descriptor;
    int last_matched_frame = 0;
    int created_frame = 0;
};

struct KeyframePolicy {
    double translation_threshold = 0.1;         // meters
    double rotation_threshold = 10.0 * std::numbers::pi / 180.0; // radians
    int stale_after = 30;                       // frames without a match
};

/// True iff the motion between the poses exceeds either threshold.
bool is_keyframe(const PoseSE3& current, const PoseSE3& last_keyframe, const KeyframePolicy& policy);

/// Immutable copy of the map contents handed to the front-end for matching.
struct MapSnapshot {
    std::vector<Eigen::Vector3d> positions;
    std::vector<Descriptor256> descriptors;

    std::size_t size() const { return positions.size(); }
};

/// Global landmark map. Written only by the back-end; the front-end matches
/// against snapshots.
class GlobalMap {
public:
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<MapPoint>& points() const { return points_; }

    /// Back-projects every feature with valid depth (0 < d < max_depth,
    /// meters) through pose^-1 and adds it with its descriptor. Features
    /// whose depth is missing (0) or out of range are skipped. Existing
    /// points are never touched. Returns the number of points added.
    int insert_keyframe(const std::vector<Feature>& features,
                        const std::vector<float>& depth, int depth_width, int depth_height,
                        const PoseSE3& pose, const CameraIntrinsics& K,
                        int frame_index, double max_depth = 8.0);

    /// Marks the map points referenced by the matches as seen at frame_index.
    void touch_matches(const std::vector<MatchResult>& matches, int frame_index);

    /// Removes points with frame_index - last_matched_frame > stale_after.
    /// Returns the number of points removed.
    int prune(int frame_index, const KeyframePolicy& policy);

    MapSnapshot snapshot() const;

    /// CSV dump: "id,x,y,z,descriptor_hex,last_matched".
    void write_csv(const std::string& path) const;

    /// Soft size cap: exceeding it after an insert logs one warning to
    /// stderr. 0 disables the warning.
    void set_soft_cap(std::size_t cap) { soft_cap_ = cap; }

private:
    std::vector<MapPoint> points_;
    std::size_t soft_cap_ = 0;
    bool warned_ = false;
};

} // namespace rsslam
