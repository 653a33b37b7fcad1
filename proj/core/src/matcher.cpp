#include "rsslam/matcher.hpp"

#include <bit>
#include <cstring>

namespace rsslam {

int hamming(const Descriptor256& a, const Descriptor256& b) {
    std::uint64_t wa[4], wb[4];
    std::memcpy(wa, a.bytes.data(), sizeof wa);
    std::memcpy(wb, b.bytes.data(), sizeof wb);
    return std::popcount(wa[0] ^ wb[0]) + std::popcount(wa[1] ^ wb[1]) +
           std::popcount(wa[2] ^ wb[2]) + std::popcount(wa[3] ^ wb[3]);
}

std::vector<MatchResult> match(const std::vector<Descriptor256>& frame_desc,
                               const std::vector<Descriptor256>& map_desc,
                               int accept_threshold) {
    std::vector<MatchResult> out;
    if (map_desc.empty()) return out;

    for (int i = 0; i < static_cast<int>(frame_desc.size()); ++i) {
        int best = 257;
        int best_j = -1;
        for (int j = 0; j < static_cast<int>(map_desc.size()); ++j) {
            const int d = hamming(frame_desc[i], map_desc[j]);
            if (d < best) { // ties keep the lowest map index
                best = d;
                best_j = j;
            }
        }
        if (best <= accept_threshold) out.push_back({i, best_j, best});
    }
    return out;
}

} // namespace rsslam
