#include "rsslam/world_map.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace rsslam {

bool is_keyframe(const PoseSE3& current, const PoseSE3& last_keyframe, const KeyframePolicy& policy) {
    return relative_translation(current, last_keyframe) > policy.translation_threshold ||
           relative_rotation(current, last_keyframe) > policy.rotation_threshold;
}

int GlobalMap::insert_keyframe(const std::vector<Feature>& features,
                               const std::vector<float>& depth, int depth_width, int depth_height,
                               const PoseSE3& pose, const CameraIntrinsics& K,
                               int frame_index, double max_depth) {
    const PoseSE3 camera_to_world = pose.inverse();
    int added = 0;
    for (const auto& f : features) {
        const int px = static_cast<int>(std::lround(f.x));
        const int py = static_cast<int>(std::lround(f.y));
        if (px < 0 || py < 0 || px >= depth_width || py >= depth_height) continue;
        const double d = depth[static_cast<std::size_t>(py) * depth_width + px];
        if (!(d > 0.0) || d >= max_depth) continue;

        const Eigen::Vector3d camera_point = back_project(K, {f.x, f.y}, d);
        points_.push_back(MapPoint{camera_to_world * camera_point, f.descriptor,
                                   frame_index, frame_index});
        ++added;
    }
    if (soft_cap_ > 0 && points_.size() > soft_cap_ && !warned_) {
        std::cerr << "rsslam: map size " << points_.size() << " exceeds soft cap " << soft_cap_
                  << "\n";
        warned_ = true;
    }
    return added;
}

void GlobalMap::touch_matches(const std::vector<MatchResult>& matches, int frame_index) {
    for (const auto& m : matches) {
        if (m.map_index >= 0 && m.map_index < static_cast<int>(points_.size()))
            points_[m.map_index].last_matched_frame = frame_index;
    }
}

int GlobalMap::prune(int frame_index, const KeyframePolicy& policy) {
    const auto stale = [&](const MapPoint& p) {
        return frame_index - p.last_matched_frame > policy.stale_after;
    };
    const auto removed = std::erase_if(points_, stale);
    return static_cast<int>(removed);
}

MapSnapshot GlobalMap::snapshot() const {
    MapSnapshot snap;
    snap.positions.reserve(points_.size());
    snap.descriptors.reserve(points_.size());
    for (const auto& p : points_) {
        snap.positions.push_back(p.position);
        snap.descriptors.push_back(p.descriptor);
    }
    return snap;
}

void GlobalMap::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("GlobalMap::write_csv: cannot open " + path);
    out << "id,x,y,z,descriptor_hex,last_matched\n";
    out.precision(9);
    out << std::fixed;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        out << i << ',' << p.position.x() << ',' << p.position.y() << ',' << p.position.z() << ','
            << to_hex(p.descriptor) << ',' << p.last_matched_frame << '\n';
    }
}

} // namespace rsslam
