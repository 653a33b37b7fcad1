#include "rsslam/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsslam {

GrayImage::GrayImage(int width, int height)
    : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, 0) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("GrayImage: dimensions must be at least 1x1");
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("GrayImage: dimensions must be at least 1x1");
    if (data_.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("GrayImage: data length must equal width * height");
}

double ImagePyramid::layer_scale(int layer) const {
    double s = 1.0;
    for (int i = 0; i < layer; ++i) s *= scale_factor;
    return s;
}

GrayImage downsample(const GrayImage& src, double scale) {
    if (!(scale > 1.0))
        throw std::invalid_argument("downsample: scale must be greater than 1");
    const int out_w = static_cast<int>(src.width() / scale);
    const int out_h = static_cast<int>(src.height() / scale);
    if (out_w < 1 || out_h < 1)
        throw std::invalid_argument("downsample: output degenerates to zero size");

    GrayImage out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        const int sy = std::min(src.height() - 1, static_cast<int>(y * scale));
        const std::uint8_t* src_row = src.row(sy);
        std::uint8_t* out_row = out.row(y);
        for (int x = 0; x < out_w; ++x)
            out_row[x] = src_row[std::min(src.width() - 1, static_cast<int>(x * scale))];
    }
    return out;
}

ImagePyramid build_pyramid(const GrayImage& src, int n_layers, double scale) {
    if (n_layers < 1)
        throw std::invalid_argument("build_pyramid: need at least one layer");
    ImagePyramid pyramid;
    pyramid.scale_factor = scale;
    pyramid.layers.reserve(n_layers);
    pyramid.layers.push_back(src);
    for (int k = 1; k < n_layers; ++k)
        pyramid.layers.push_back(downsample(pyramid.layers.back(), scale));
    return pyramid;
}

const std::array<std::array<double, 7>, 7>& smooth_kernel() {
    static const std::array<std::array<double, 7>, 7> kernel = [] {
        std::array<std::array<double, 7>, 7> k{};
        const double sigma = 2.0;
        double sum = 0.0;
        for (int dy = -3; dy <= 3; ++dy)
            for (int dx = -3; dx <= 3; ++dx) {
                const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
                k[dy + 3][dx + 3] = w;
                sum += w;
            }
        for (auto& row : k)
            for (auto& w : row) w /= sum;
        return k;
    }();
    return kernel;
}

namespace {

inline int clamp_coord(int v, int limit) { return v < 0 ? 0 : (v >= limit ? limit - 1 : v); }

inline std::uint8_t round_to_u8(double v) {
    long r = std::lround(v);
    if (r < 0) r = 0;
    if (r > 255) r = 255;
    return static_cast<std::uint8_t>(r);
}

} // namespace

namespace {

// One row of the window, accumulated left to right. Written as a single
// expression so the seven independent row chains can overlap in the pipeline
// while the floating-point evaluation order stays fixed.
inline double kernel_row_sum(const double* k, const std::uint8_t* s) {
    return k[0] * s[0] + k[1] * s[1] + k[2] * s[2] + k[3] * s[3] + k[4] * s[4] + k[5] * s[5] +
           k[6] * s[6];
}

} // namespace

GrayImage smooth(const GrayImage& src) {
    const auto& kernel = smooth_kernel();
    const int w = src.width();
    const int h = src.height();
    GrayImage out(w, h);

    std::uint8_t clamped[7];
    for (int y = 0; y < h; ++y) {
        const bool border_row = y < 3 || y >= h - 3;
        std::uint8_t* out_row = out.row(y);
        for (int x = 0; x < w; ++x) {
            double rows[7];
            if (border_row || x < 3 || x >= w - 3) {
                for (int dy = -3; dy <= 3; ++dy) {
                    const std::uint8_t* src_row = src.row(clamp_coord(y + dy, h));
                    for (int dx = -3; dx <= 3; ++dx)
                        clamped[dx + 3] = src_row[clamp_coord(x + dx, w)];
                    rows[dy + 3] = kernel_row_sum(kernel[dy + 3].data(), clamped);
                }
            } else {
                for (int dy = -3; dy <= 3; ++dy)
                    rows[dy + 3] =
                        kernel_row_sum(kernel[dy + 3].data(), src.row(y + dy) + x - 3);
            }
            const double acc = rows[0] + rows[1] + rows[2] + rows[3] + rows[4] + rows[5] + rows[6];
            out_row[x] = round_to_u8(acc);
        }
    }
    return out;
}

} // namespace rsslam
