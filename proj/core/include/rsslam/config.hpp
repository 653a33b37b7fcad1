#pragma once

#include <cstdint>
#include <string>

#include "rsslam/camera.hpp"
#include "rsslam/orb_extractor.hpp"
#include "rsslam/world_map.hpp"

namespace rsslam {

/// Full run configuration. Defaults are the fr1 calibration and the standard
/// thresholds; a "key = value" text file overrides individual fields.
struct SlamConfig {
    CameraIntrinsics intrinsics{517.3, 516.5, 318.6, 255.3, 5000.0}; // fr1 preset

    // pyramid
    int n_layers = 4;
    double scale_factor = 1.2;

    // extraction
    ExtractorConfig extractor;

    // matching
    int match_threshold = 64;

    // pose estimation
    int ransac_iterations = 100;
    double ransac_inlier_px = 3.0;
    std::uint64_t seed = 1;

    // map maintenance
    KeyframePolicy keyframe;
    double max_depth = 8.0;
    std::size_t map_soft_cap = 0;

    /// Empty = use the built-in canonical pattern.
    std::string pattern_file;
};

/// Applies a named intrinsics preset ("fr1" or "fr2", TUM calibration).
/// Throws std::runtime_error for unknown names.
void apply_preset(SlamConfig& config, const std::string& name);

/// Parses a "key = value" config file. '#' starts a comment; blank lines are
/// skipped; "preset" lines apply a preset before later keys override it.
/// Unknown keys or unparsable values raise std::runtime_error with the line
/// number. Keys: preset, fx, fy, cx, cy, depth_scale, n_layers, scale_factor,
/// fast_threshold, max_features, harris_k, match_threshold,
/// ransac_iterations, ransac_inlier_px, seed, keyframe_translation,
/// keyframe_rotation_deg, stale_after, max_depth, map_soft_cap, pattern_file.
SlamConfig load_config(const std::string& path);

} // namespace rsslam
