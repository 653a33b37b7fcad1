#include "rsslam/orb_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace rsslam {

const std::array<std::array<int, 2>, 16>& fast_circle() {
    // Bresenham circle of radius 3, clockwise from 12 o'clock.
    static const std::array<std::array<int, 2>, 16> circle = {{{0, -3},
                                                               {1, -3},
                                                               {2, -2},
                                                               {3, -1},
                                                               {3, 0},
                                                               {3, 1},
                                                               {2, 2},
                                                               {1, 3},
                                                               {0, 3},
                                                               {-1, 3},
                                                               {-2, 2},
                                                               {-3, 1},
                                                               {-3, 0},
                                                               {-3, -1},
                                                               {-2, -2},
                                                               {-1, -3}}};
    return circle;
}

namespace {

// True iff mask (16 circular bits) contains a run of at least 9 set bits.
bool has_run_of_9(unsigned mask) {
    if (mask == 0xffffu) return true;
    const unsigned doubled = mask | (mask << 16);
    int run = 0;
    for (int i = 0; i < 32; ++i) {
        if (doubled & (1u << i)) {
            if (++run >= 9) return true;
        } else {
            run = 0;
        }
    }
    return false;
}

} // namespace

std::vector<Keypoint> detect_fast(const GrayImage& img, int threshold) {
    std::vector<Keypoint> out;
    const int w = img.width();
    const int h = img.height();
    if (w < 7 || h < 7) return out;

    const auto& circle = fast_circle();
    // Row strides of the circle pixels, valid anywhere at least 3 from the border.
    std::array<std::ptrdiff_t, 16> offset{};
    for (int i = 0; i < 16; ++i)
        offset[i] = static_cast<std::ptrdiff_t>(circle[i][1]) * w + circle[i][0];

    for (int y = 3; y < h - 3; ++y) {
        const std::uint8_t* row = img.row(y);
        for (int x = 3; x < w - 3; ++x) {
            const std::uint8_t* p = row + x;
            const int lo = *p - threshold;
            const int hi = *p + threshold;

            // Compass pre-test: any 9-run covers at least two of the four
            // compass points, so fewer than two bright and two dark rejects.
            int bright = 0, dark = 0;
            for (int i = 0; i < 16; i += 4) {
                const int v = p[offset[i]];
                bright += v > hi;
                dark += v < lo;
            }
            if (bright < 2 && dark < 2) continue;

            unsigned bright_mask = 0, dark_mask = 0;
            for (int i = 0; i < 16; ++i) {
                const int v = p[offset[i]];
                bright_mask |= static_cast<unsigned>(v > hi) << i;
                dark_mask |= static_cast<unsigned>(v < lo) << i;
            }
            if (has_run_of_9(bright_mask) || has_run_of_9(dark_mask))
                out.push_back({x, y, 0.0});
        }
    }
    return out;
}

double harris_score(const GrayImage& img, int x, int y, double k) {
    // Sobel gradients over the 7x7 block need a 9x9 support window.
    if (x < 4 || y < 4 || x >= img.width() - 4 || y >= img.height() - 4)
        throw std::out_of_range("harris_score: 7x7 block (with gradient support) out of bounds");

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int dy = -3; dy <= 3; ++dy) {
        for (int dx = -3; dx <= 3; ++dx) {
            const int px = x + dx;
            const int py = y + dy;
            const int gx = (img.at(px + 1, py - 1) + 2 * img.at(px + 1, py) + img.at(px + 1, py + 1)) -
                           (img.at(px - 1, py - 1) + 2 * img.at(px - 1, py) + img.at(px - 1, py + 1));
            const int gy = (img.at(px - 1, py + 1) + 2 * img.at(px, py + 1) + img.at(px + 1, py + 1)) -
                           (img.at(px - 1, py - 1) + 2 * img.at(px, py - 1) + img.at(px + 1, py - 1));
            sxx += static_cast<double>(gx) * gx;
            syy += static_cast<double>(gy) * gy;
            sxy += static_cast<double>(gx) * gy;
        }
    }
    const double det = sxx * syy - sxy * sxy;
    const double trace = sxx + syy;
    return det - k * trace * trace;
}

std::vector<Keypoint> nms(const std::vector<Keypoint>& candidates) {
    std::vector<Keypoint> out;
    if (candidates.empty()) return out;

    // Raster order breaks ties: the earlier of two equal scores wins.
    const auto beats = [](const Keypoint& a, const Keypoint& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    };

    int max_x = 0, max_y = 0;
    for (const auto& c : candidates) {
        max_x = std::max(max_x, c.x);
        max_y = std::max(max_y, c.y);
    }
    const int grid_w = max_x + 2;
    const std::int64_t cells = static_cast<std::int64_t>(grid_w) * (max_y + 2);

    if (cells <= (1 << 24)) {
        // Dense occupancy grid over the coordinate range (pixel coordinates,
        // so this is the common path).
        std::vector<std::int32_t> grid(cells, -1);
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(candidates.size()); ++i)
            grid[static_cast<std::size_t>(candidates[i].y) * grid_w + candidates[i].x] = i;
        for (const auto& c : candidates) {
            bool keep = true;
            for (int dy = -1; dy <= 1 && keep; ++dy) {
                if (c.y + dy < 0) continue;
                const std::int32_t* row = grid.data() + static_cast<std::size_t>(c.y + dy) * grid_w;
                for (int dx = -1; dx <= 1 && keep; ++dx) {
                    if ((dx == 0 && dy == 0) || c.x + dx < 0) continue;
                    const std::int32_t other = row[c.x + dx];
                    if (other >= 0 && !beats(c, candidates[other])) keep = false;
                }
            }
            if (keep) out.push_back(c);
        }
        return out;
    }

    std::unordered_map<std::int64_t, const Keypoint*> grid;
    grid.reserve(candidates.size() * 2);
    const auto key = [](int x, int y) {
        return (static_cast<std::int64_t>(y) << 32) | static_cast<std::uint32_t>(x);
    };
    for (const auto& c : candidates) grid.emplace(key(c.x, c.y), &c);
    for (const auto& c : candidates) {
        bool keep = true;
        for (int dy = -1; dy <= 1 && keep; ++dy)
            for (int dx = -1; dx <= 1 && keep; ++dx) {
                if (dx == 0 && dy == 0) continue;
                auto it = grid.find(key(c.x + dx, c.y + dy));
                if (it != grid.end() && !beats(c, *it->second)) keep = false;
            }
        if (keep) out.push_back(c);
    }
    return out;
}

int compute_orientation(const GrayImage& smoothed, int x, int y) {
    constexpr int r = 15;
    if (x < r || y < r || x >= smoothed.width() - r || y >= smoothed.height() - r)
        throw std::out_of_range("compute_orientation: radius-15 disc out of bounds");

    // Horizontal extent of the disc (dx^2 + dy^2 <= r^2) per row.
    static const auto extent = [] {
        std::array<int, 2 * r + 1> e{};
        for (int dy = -r; dy <= r; ++dy)
            e[dy + r] = static_cast<int>(std::sqrt(static_cast<double>(r * r - dy * dy)));
        return e;
    }();

    std::int64_t sum_i = 0, sum_x = 0, sum_y = 0;
    for (int dy = -r; dy <= r; ++dy) {
        const std::uint8_t* row = smoothed.row(y + dy) + x;
        const int span = extent[dy + r];
        std::int64_t row_i = 0, row_x = 0;
        for (int dx = -span; dx <= span; ++dx) {
            const int v = row[dx];
            row_i += v;
            row_x += static_cast<std::int64_t>(v) * dx;
        }
        sum_i += row_i;
        sum_x += row_x;
        sum_y += row_i * dy;
    }
    if (sum_i == 0) return 0; // fully black patch

    // atan2 of the centroid offset; the 1/sum_i factors cancel.
    const double theta = std::atan2(static_cast<double>(sum_y), static_cast<double>(sum_x));
    const long bin = std::lround(theta / (std::numbers::pi / 16.0));
    return static_cast<int>(((bin % 32) + 32) % 32);
}

Descriptor256 compute_descriptor(const GrayImage& smoothed, int x, int y,
                                 const RsBriefPattern& pattern) {
    constexpr int r = 15;
    if (x < r || y < r || x >= smoothed.width() - r || y >= smoothed.height() - r)
        throw std::out_of_range("compute_descriptor: radius-15 patch out of bounds");

    Descriptor256 desc;
    for (int i = 0; i < kPatternTests; ++i) {
        const auto& s = pattern.expanded_s[i];
        const auto& d = pattern.expanded_d[i];
        const std::uint8_t vs =
            smoothed.at(x + static_cast<int>(std::lround(s.x)), y + static_cast<int>(std::lround(s.y)));
        const std::uint8_t vd =
            smoothed.at(x + static_cast<int>(std::lround(d.x)), y + static_cast<int>(std::lround(d.y)));
        if (vs > vd) desc.set_bit(i, true);
    }
    return desc;
}

TopNFilter::TopNFilter(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("TopNFilter: capacity must be at least 1");
    heap_.reserve(capacity);
}

// Heap comparator: orders "kept more eagerly" entries after the eviction
// candidate, so the heap front is the lowest score, latest arrival on ties.
bool TopNFilter::worse(const Entry& a, const Entry& b) {
    if (a.feature.score != b.feature.score) return a.feature.score > b.feature.score;
    return a.arrival < b.arrival;
}

void TopNFilter::add(Feature feature) {
    Entry entry{std::move(feature), next_arrival_++};
    if (heap_.size() < static_cast<std::size_t>(capacity_)) {
        heap_.push_back(std::move(entry));
        std::push_heap(heap_.begin(), heap_.end(), &TopNFilter::worse);
        return;
    }
    // Equal scores keep the incumbent: the newcomer always arrived later.
    if (entry.feature.score > heap_.front().feature.score) {
        std::pop_heap(heap_.begin(), heap_.end(), &TopNFilter::worse);
        heap_.back() = std::move(entry);
        std::push_heap(heap_.begin(), heap_.end(), &TopNFilter::worse);
    }
}

std::vector<Feature> TopNFilter::take() {
    std::sort(heap_.begin(), heap_.end(),
              [](const Entry& a, const Entry& b) { return a.arrival < b.arrival; });
    std::vector<Feature> out;
    out.reserve(heap_.size());
    for (auto& e : heap_) out.push_back(std::move(e.feature));
    heap_.clear();
    next_arrival_ = 0;
    return out;
}

std::vector<Feature> filter_top_n(const std::vector<Feature>& features, int capacity) {
    TopNFilter filter(capacity);
    for (const auto& f : features) filter.add(f);
    return filter.take();
}

namespace {

// Pattern offsets rounded to the pixel grid once per extract() call. The
// rounding (lround) is the same one compute_descriptor applies per sample,
// so both paths produce identical descriptors.
struct IntPattern {
    std::array<std::int16_t, kPatternTests> sx, sy, dx, dy;

    explicit IntPattern(const RsBriefPattern& p) {
        for (int i = 0; i < kPatternTests; ++i) {
            sx[i] = static_cast<std::int16_t>(std::lround(p.expanded_s[i].x));
            sy[i] = static_cast<std::int16_t>(std::lround(p.expanded_s[i].y));
            dx[i] = static_cast<std::int16_t>(std::lround(p.expanded_d[i].x));
            dy[i] = static_cast<std::int16_t>(std::lround(p.expanded_d[i].y));
        }
    }
};

Descriptor256 sample_descriptor(const GrayImage& smoothed, int x, int y, const IntPattern& pattern) {
    Descriptor256 desc;
    for (int i = 0; i < kPatternTests; ++i) {
        const std::uint8_t vs = smoothed.at(x + pattern.sx[i], y + pattern.sy[i]);
        const std::uint8_t vd = smoothed.at(x + pattern.dx[i], y + pattern.dy[i]);
        if (vs > vd) desc.set_bit(i, true);
    }
    return desc;
}

} // namespace

std::vector<Feature> extract(const ImagePyramid& pyramid, const ExtractorConfig& config,
                             const RsBriefPattern& pattern, ExtractStats* stats) {
    TopNFilter filter(config.max_features);
    const IntPattern int_pattern(pattern);
    ExtractStats local{};

    for (int layer = 0; layer < static_cast<int>(pyramid.layers.size()); ++layer) {
        const GrayImage& img = pyramid.layers[layer];
        const int margin = kFeatureBorderMargin;
        if (img.width() < 2 * margin + 1 || img.height() < 2 * margin + 1) continue;

        std::vector<Keypoint> candidates = detect_fast(img, config.fast_threshold);
        std::erase_if(candidates, [&](const Keypoint& c) {
            return c.x < margin || c.y < margin || c.x >= img.width() - margin ||
                   c.y >= img.height() - margin;
        });
        local.fast_candidates += static_cast<int>(candidates.size());

        for (auto& c : candidates) c.score = harris_score(img, c.x, c.y, config.harris_k);
        std::vector<Keypoint> kept = nms(candidates);
        local.after_nms += static_cast<int>(kept.size());
        if (kept.empty()) continue;

        const GrayImage smoothed = smooth(img);
        const double layer_scale = pyramid.layer_scale(layer);
        for (const auto& kp : kept) {
            const int orientation = compute_orientation(smoothed, kp.x, kp.y);
            Descriptor256 desc = sample_descriptor(smoothed, kp.x, kp.y, int_pattern);
            desc = rotate_descriptor(desc, orientation);
            filter.add(Feature{kp.x * layer_scale, kp.y * layer_scale, layer, kp.score,
                               orientation, desc});
        }
    }

    if (stats) *stats = local;
    return filter.take();
}

} // namespace rsslam
