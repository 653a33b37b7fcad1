#pragma once

#include <vector>

#include "rsslam/descriptor.hpp"

namespace rsslam {

struct MatchResult {
    int feature_index = 0; // index into the frame descriptor list
    int map_index = 0;     // index into the map descriptor list
    int distance = 0;      // Hamming distance, 0..256
};

/// Number of differing bits between two descriptors.
int hamming(const Descriptor256& a, const Descriptor256& b);

/// Brute-force matching: for each frame descriptor, the map descriptor of
/// minimum Hamming distance (ties to the lowest map index). A match is
/// emitted only when the distance is at most accept_threshold; pass 256 to
/// disable the gate. An empty map yields an empty result.
std::vector<MatchResult> match(const std::vector<Descriptor256>& frame_desc,
                               const std::vector<Descriptor256>& map_desc,
                               int accept_threshold = 64);

} // namespace rsslam
