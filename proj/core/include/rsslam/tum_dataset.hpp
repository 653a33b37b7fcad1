#pragma once

#include <string>
#include <vector>

#include "rsslam/camera.hpp"
#include "rsslam/image.hpp"
#include "rsslam/trajectory.hpp"

namespace rsslam {

/// Associated color/depth pair, decoded. Depth is in meters, 0 = missing.
struct RgbdFrame {
    double timestamp = 0.0; // rgb timestamp, seconds
    GrayImage gray;
    std::vector<float> depth;
    int depth_width = 0;
    int depth_height = 0;

    float depth_at(int x, int y) const { return depth[static_cast<std::size_t>(y) * depth_width + x]; }
};

/// One associated entry of a sequence index, before decoding.
struct SequenceEntry {
    double rgb_timestamp = 0.0;
    double depth_timestamp = 0.0;
    std::string rgb_path;   // absolute
    std::string depth_path; // absolute
};

inline constexpr double kAssocWindow = 0.02; // seconds

/// Parses rgb.txt and depth.txt under dir and pairs entries greedily by
/// smallest timestamp difference within the association window. Pairing is
/// injective; unpaired entries are dropped. Entries are returned ordered by
/// rgb timestamp. Throws std::runtime_error when an index file is missing or
/// malformed.
std::vector<SequenceEntry> load_sequence_index(const std::string& dir,
                                               double window = kAssocWindow);

/// Decodes one entry: RGB converted to grayscale via integer luma, 16-bit
/// depth divided by depth_scale (raw 0 stays 0 = missing).
RgbdFrame load_frame(const SequenceEntry& entry, double depth_scale = 5000.0);

/// Convenience: index + decode of the whole sequence. Intended for short
/// sequences and tests; long runs should stream entries through load_frame.
std::vector<RgbdFrame> load_sequence(const std::string& dir, double depth_scale = 5000.0);

/// Loads a TUM ground-truth trajectory ("timestamp tx ty tz qx qy qz qw",
/// camera -> world). Comment lines are skipped, quaternions normalized;
/// malformed lines raise std::runtime_error with their line number.
Trajectory load_ground_truth(const std::string& path);

} // namespace rsslam
