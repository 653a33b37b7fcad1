#pragma once

#include <vector>

#include "rsslam/brief_pattern.hpp"
#include "rsslam/descriptor.hpp"
#include "rsslam/image.hpp"

namespace rsslam {

/// Keypoint candidate in layer coordinates, before descriptor computation.
struct Keypoint {
    int x = 0;
    int y = 0;
    double score = 0.0;
};

/// Extracted feature. x and y are layer-0 coordinates (layer coordinates
/// scaled by scale_factor^layer); orientation is the 11.25-degree bin label.
struct Feature {
    double x = 0.0;
    double y = 0.0;
    int layer = 0;
    double score = 0.0;
    int orientation = 0;
    Descriptor256 descriptor;
};

struct ExtractorConfig {
    int fast_threshold = 20;
    int max_features = 1024;
    double harris_k = 0.04;
};

/// Counters filled by extract(); useful for tests and the bench harness.
struct ExtractStats {
    int fast_candidates = 0;   // FAST detections inside the border margin
    int after_nms = 0;         // candidates surviving non-maximum suppression
};

/// Margin (pixels) a feature must keep from the layer border: 15 for the
/// sampling patch radius plus 3 so descriptor samples never touch
/// replicated smoothing borders.
inline constexpr int kFeatureBorderMargin = 18;

/// FAST-9 segment test on the 16-pixel Bresenham circle of radius 3: a pixel
/// is a corner iff at least 9 contiguous circle pixels are all brighter than
/// center + threshold or all darker than center - threshold. Scans every
/// pixel at least 3 from the border; returned in raster order with score 0.
std::vector<Keypoint> detect_fast(const GrayImage& img, int threshold);

/// The 16 circle offsets used by detect_fast, clockwise from (0, -3).
const std::array<std::array<int, 2>, 16>& fast_circle();

/// Harris corner response det(M) - k * trace(M)^2, with M the second-moment
/// matrix of 3x3 Sobel gradients summed over the 7x7 block centered at
/// (x, y). Gradient support requires (x, y) at least 4 pixels from the
/// border; throws std::out_of_range otherwise.
double harris_score(const GrayImage& img, int x, int y, double k = 0.04);

/// 3x3 non-maximum suppression: a candidate survives iff its score beats
/// every other candidate within Chebyshev distance 1; equal scores are broken
/// by raster order (smaller y, then smaller x, wins).
std::vector<Keypoint> nms(const std::vector<Keypoint>& candidates);

/// Intensity-centroid orientation over the radius-15 disc (inclusive) around
/// (x, y): the mass center of intensities, expressed relative to the center,
/// gives the angle atan2(v, u), quantized to label round(theta / 11.25 deg)
/// mod 32. A fully black patch maps to label 0. The disc must be inside the
/// image; throws std::out_of_range otherwise.
int compute_orientation(const GrayImage& smoothed, int x, int y);

/// Descriptor bit i is set iff the smoothed intensity at offset expanded_s[i]
/// is strictly greater than the one at expanded_d[i]. Offsets are rounded to
/// the pixel grid with lround. The radius-15 patch must be inside the image;
/// throws std::out_of_range otherwise.
Descriptor256 compute_descriptor(const GrayImage& smoothed, int x, int y,
                                 const RsBriefPattern& pattern);

/// Bounded keep-best-N filter over a feature stream. Backed by a min-heap on
/// (score, arrival): when full, a new feature evicts the current minimum only
/// if its score is strictly greater; among equal scores the earliest arrival
/// is kept. take() returns survivors in arrival order.
class TopNFilter {
public:
    explicit TopNFilter(int capacity);

    void add(Feature feature);
    std::size_t size() const { return heap_.size(); }

    /// Survivors sorted by arrival order. Leaves the filter empty.
    std::vector<Feature> take();

private:
    struct Entry {
        Feature feature;
        std::uint64_t arrival;
    };
    static bool worse(const Entry& a, const Entry& b);

    int capacity_;
    std::uint64_t next_arrival_ = 0;
    std::vector<Entry> heap_; // min-heap: heap_.front() is the eviction candidate
};

/// Convenience wrapper: feeds features through a TopNFilter.
std::vector<Feature> filter_top_n(const std::vector<Feature>& features, int capacity);

/// Full extraction over the pyramid in the streaming order: per layer,
/// detect -> Harris -> NMS -> smooth -> orientation -> descriptor ->
/// descriptor rotation, every surviving candidate feeding one shared top-N
/// filter across all layers. Candidates closer than kFeatureBorderMargin to
/// the layer border are dropped before suppression. Output coordinates are
/// scaled back to layer 0.
std::vector<Feature> extract(const ImagePyramid& pyramid, const ExtractorConfig& config,
                             const RsBriefPattern& pattern, ExtractStats* stats = nullptr);

} // namespace rsslam
