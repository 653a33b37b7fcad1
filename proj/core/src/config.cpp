#include "rsslam/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rsslam {

void apply_preset(SlamConfig& config, const std::string& name) {
    if (name == "fr1") {
        config.intrinsics = {517.3, 516.5, 318.6, 255.3, 5000.0};
    } else if (name == "fr2") {
        config.intrinsics = {520.9, 521.0, 325.1, 249.7, 5000.0};
    } else {
        throw std::runtime_error("unknown intrinsics preset '" + name + "'");
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

SlamConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);

    SlamConfig config;
    std::string line;
    int line_no = 0;
    const auto fail = [&](const std::string& what) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail("expected 'key = value'");

        const auto as_double = [&] {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                fail("cannot parse '" + value + "' as a number");
            }
            if (used != value.size()) fail("trailing characters after number '" + value + "'");
            return v;
        };
        const auto as_int = [&] {
            const double v = as_double();
            const long long i = static_cast<long long>(v);
            if (static_cast<double>(i) != v) fail("expected an integer, got '" + value + "'");
            return i;
        };

        if (key == "preset") {
            try {
                apply_preset(config, value);
            } catch (const std::runtime_error& e) {
                fail(e.what());
            }
        } else if (key == "fx") {
            config.intrinsics.fx = as_double();
        } else if (key == "fy") {
            config.intrinsics.fy = as_double();
        } else if (key == "cx") {
            config.intrinsics.cx = as_double();
        } else if (key == "cy") {
            config.intrinsics.cy = as_double();
        } else if (key == "depth_scale") {
            config.intrinsics.depth_scale = as_double();
        } else if (key == "n_layers") {
            config.n_layers = static_cast<int>(as_int());
        } else if (key == "scale_factor") {
            config.scale_factor = as_double();
        } else if (key == "fast_threshold") {
            config.extractor.fast_threshold = static_cast<int>(as_int());
        } else if (key == "max_features") {
            config.extractor.max_features = static_cast<int>(as_int());
        } else if (key == "harris_k") {
            config.extractor.harris_k = as_double();
        } else if (key == "match_threshold") {
            config.match_threshold = static_cast<int>(as_int());
        } else if (key == "ransac_iterations") {
            config.ransac_iterations = static_cast<int>(as_int());
        } else if (key == "ransac_inlier_px") {
            config.ransac_inlier_px = as_double();
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(as_int());
        } else if (key == "keyframe_translation") {
            config.keyframe.translation_threshold = as_double();
        } else if (key == "keyframe_rotation_deg") {
            config.keyframe.rotation_threshold = as_double() * std::numbers::pi / 180.0;
        } else if (key == "stale_after") {
            config.keyframe.stale_after = static_cast<int>(as_int());
        } else if (key == "max_depth") {
            config.max_depth = as_double();
        } else if (key == "map_soft_cap") {
            config.map_soft_cap = static_cast<std::size_t>(as_int());
        } else if (key == "pattern_file") {
            config.pattern_file = value;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    return config;
}

} // namespace rsslam
