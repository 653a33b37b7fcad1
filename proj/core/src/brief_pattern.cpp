#include "rsslam/brief_pattern.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rsslam {

double label_angle(int n) { return n * (std::numbers::pi / 16.0); }

namespace {

// 53-bit uniform in [0, 1). mt19937_64 output is fully specified by the
// standard, so the stream is identical across platforms.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller pair of standard normals. Hand-rolled instead of
// std::normal_distribution, whose output sequence is implementation-defined;
// the canonical pattern must not depend on the standard library build.
void next_gaussian_pair(std::mt19937_64& rng, double& z0, double& z1) {
    const double u1 = 1.0 - next_uniform(rng); // (0, 1]
    const double u2 = next_uniform(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(2.0 * std::numbers::pi * u2);
    z1 = r * std::sin(2.0 * std::numbers::pi * u2);
}

PatternPoint draw_seed(std::mt19937_64& rng, double sigma, double radius) {
    for (;;) {
        double z0 = 0.0, z1 = 0.0;
        next_gaussian_pair(rng, z0, z1);
        const double x = sigma * z0;
        const double y = sigma * z1;
        if (x * x + y * y <= radius * radius) return {x, y};
    }
}

PatternPoint rotate_point(const PatternPoint& p, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {p.x * c - p.y * s, p.y * c + p.x * s};
}

void expand(const std::array<PatternPoint, kPatternSeeds>& seeds,
            std::array<PatternPoint, kPatternTests>& expanded) {
    for (int r = 0; r < kPatternRotations; ++r) {
        const double theta = label_angle(r);
        for (int j = 0; j < kPatternSeeds; ++j)
            expanded[r * kPatternSeeds + j] = rotate_point(seeds[j], theta);
    }
}

} // namespace

RsBriefPattern generate_pattern(std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    RsBriefPattern pattern;
    const double sigma = 6.0;
    for (auto& p : pattern.seed_s) p = draw_seed(rng, sigma, kPatternRadius);
    for (auto& p : pattern.seed_d) p = draw_seed(rng, sigma, kPatternRadius);
    expand(pattern.seed_s, pattern.expanded_s);
    expand(pattern.seed_d, pattern.expanded_d);
    return pattern;
}

const RsBriefPattern& canonical_pattern() {
    static const RsBriefPattern pattern = generate_pattern(kCanonicalPatternSeed);
    return pattern;
}

void write_pattern(const RsBriefPattern& pattern, std::ostream& out) {
    out << "# RS-BRIEF sampling pattern: 32-fold rotationally symmetric, 8 seed pairs\n"
        << "# set rotation_index x y\n";
    out << std::setprecision(17);
    const auto dump = [&](char set, const std::array<PatternPoint, kPatternTests>& pts) {
        for (int r = 0; r < kPatternRotations; ++r)
            for (int j = 0; j < kPatternSeeds; ++j) {
                const auto& p = pts[r * kPatternSeeds + j];
                out << set << ' ' << r << ' ' << p.x << ' ' << p.y << '\n';
            }
    };
    dump('s', pattern.expanded_s);
    dump('d', pattern.expanded_d);
}

void save_pattern(const RsBriefPattern& pattern, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_pattern: cannot open " + path);
    write_pattern(pattern, out);
    if (!out) throw std::runtime_error("save_pattern: write failed for " + path);
}

RsBriefPattern read_pattern(std::istream& in, const std::string& name) {
    std::array<std::array<std::vector<PatternPoint>, kPatternRotations>, 2> buckets;
    std::string line;
    int line_no = 0;
    const auto fail = [&](const std::string& what) {
        throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        char set = 0;
        int rotation = 0;
        double x = 0.0, y = 0.0;
        if (!(ls >> set >> rotation >> x >> y)) fail("malformed pattern line");
        if (set != 's' && set != 'd') fail("set must be 's' or 'd'");
        if (rotation < 0 || rotation >= kPatternRotations) fail("rotation index out of range");
        if (x * x + y * y > kPatternRadius * kPatternRadius + 1e-6)
            fail("offset magnitude exceeds the patch radius");
        auto& bucket = buckets[set == 's' ? 0 : 1][rotation];
        if (bucket.size() >= kPatternSeeds) fail("more than 8 offsets for one rotation");
        bucket.push_back({x, y});
    }

    RsBriefPattern pattern;
    for (int which = 0; which < 2; ++which) {
        auto& expanded = which == 0 ? pattern.expanded_s : pattern.expanded_d;
        auto& seeds = which == 0 ? pattern.seed_s : pattern.seed_d;
        for (int r = 0; r < kPatternRotations; ++r) {
            const auto& bucket = buckets[which][r];
            if (bucket.size() != kPatternSeeds)
                throw std::runtime_error(name + ": rotation " + std::to_string(r) + " of set " +
                                         (which == 0 ? "'s'" : "'d'") + " has " +
                                         std::to_string(bucket.size()) + " offsets, expected 8");
            for (int j = 0; j < kPatternSeeds; ++j) expanded[r * kPatternSeeds + j] = bucket[j];
        }
        for (int j = 0; j < kPatternSeeds; ++j) seeds[j] = expanded[j];
    }
    return pattern;
}

RsBriefPattern load_pattern(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_pattern: cannot open " + path);
    return read_pattern(in, path);
}

} // namespace rsslam
