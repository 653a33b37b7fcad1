#include "rsslam/tum_dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rsslam/png_io.hpp"

namespace rsslam {

namespace {

struct IndexEntry {
    double timestamp = 0.0;
    std::string path;
};

std::vector<IndexEntry> read_index(const std::string& file, const std::string& dir) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("load_sequence_index: missing index file " + file);

    std::vector<IndexEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double t = 0.0;
        std::string rel;
        if (!(ls >> t >> rel))
            throw std::runtime_error(file + ":" + std::to_string(line_no) + ": malformed index line");
        entries.push_back({t, dir + "/" + rel});
    }
    std::sort(entries.begin(), entries.end(),
              [](const IndexEntry& a, const IndexEntry& b) { return a.timestamp < b.timestamp; });
    return entries;
}

} // namespace

std::vector<SequenceEntry> load_sequence_index(const std::string& dir, double window) {
    const std::vector<IndexEntry> rgb = read_index(dir + "/rgb.txt", dir);
    const std::vector<IndexEntry> depth = read_index(dir + "/depth.txt", dir);

    // Greedy nearest-timestamp association: all candidate pairs inside the
    // window, best |dt| first, each entry used at most once.
    struct Candidate {
        double dt;
        int rgb_index;
        int depth_index;
    };
    std::vector<Candidate> candidates;
    for (int i = 0; i < static_cast<int>(rgb.size()); ++i) {
        for (int j = 0; j < static_cast<int>(depth.size()); ++j) {
            const double dt = std::abs(rgb[i].timestamp - depth[j].timestamp);
            if (dt <= window) candidates.push_back({dt, i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dt != b.dt) return a.dt < b.dt;
        return a.rgb_index != b.rgb_index ? a.rgb_index < b.rgb_index : a.depth_index < b.depth_index;
    });

    std::vector<char> rgb_used(rgb.size(), 0), depth_used(depth.size(), 0);
    std::vector<SequenceEntry> out;
    for (const auto& c : candidates) {
        if (rgb_used[c.rgb_index] || depth_used[c.depth_index]) continue;
        rgb_used[c.rgb_index] = depth_used[c.depth_index] = 1;
        out.push_back({rgb[c.rgb_index].timestamp, depth[c.depth_index].timestamp,
                       rgb[c.rgb_index].path, depth[c.depth_index].path});
    }
    std::sort(out.begin(), out.end(), [](const SequenceEntry& a, const SequenceEntry& b) {
        return a.rgb_timestamp < b.rgb_timestamp;
    });
    return out;
}

RgbdFrame load_frame(const SequenceEntry& entry, double depth_scale) {
    RgbdFrame frame;
    frame.timestamp = entry.rgb_timestamp;
    frame.gray = read_png_gray(entry.rgb_path);

    const Raster16 raw = read_png_gray16(entry.depth_path);
    frame.depth_width = raw.width;
    frame.depth_height = raw.height;
    frame.depth.resize(raw.data.size());
    const float inv_scale = static_cast<float>(1.0 / depth_scale);
    for (std::size_t i = 0; i < raw.data.size(); ++i)
        frame.depth[i] = raw.data[i] == 0 ? 0.0f : raw.data[i] * inv_scale; // 0 = missing

    if (frame.gray.width() != frame.depth_width || frame.gray.height() != frame.depth_height)
        throw std::runtime_error("load_frame: rgb and depth dimensions differ for " +
                                 entry.rgb_path);
    return frame;
}

std::vector<RgbdFrame> load_sequence(const std::string& dir, double depth_scale) {
    std::vector<RgbdFrame> frames;
    for (const auto& entry : load_sequence_index(dir)) frames.push_back(load_frame(entry, depth_scale));
    return frames;
}

Trajectory load_ground_truth(const std::string& path) { return read_trajectory(path); }

} // namespace rsslam
