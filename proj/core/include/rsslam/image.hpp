#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rsslam {

/// Row-major 8-bit grayscale raster.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }

    std::uint8_t at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint8_t& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    /// Pointer to the first pixel of row y.
    const std::uint8_t* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }
    std::uint8_t* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    bool operator==(const GrayImage& other) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Scale stack of grayscale images. Layer 0 is the original image; layer k
/// has dimensions floor(layer k-1 / scale_factor).
struct ImagePyramid {
    std::vector<GrayImage> layers;
    double scale_factor = 1.2;

    /// Multiplier that maps layer coordinates back to layer-0 coordinates.
    double layer_scale(int layer) const;
};

/// Nearest-neighbor downsampling: out(x, y) = src(floor(x * scale), floor(y * scale)).
/// Output dimensions are floor(src / scale). Throws std::invalid_argument when
/// scale <= 1 or either output dimension degenerates to zero.
GrayImage downsample(const GrayImage& src, double scale);

/// Builds an n_layers pyramid, layer by layer, via downsample().
ImagePyramid build_pyramid(const GrayImage& src, int n_layers = 4, double scale = 1.2);

/// The 7x7 Gaussian smoothing kernel (sigma = 2), normalized to sum 1.
/// k[dy + 3][dx + 3] is the weight of the pixel at offset (dx, dy).
const std::array<std::array<double, 7>, 7>& smooth_kernel();

/// 7x7 Gaussian blur (sigma = 2) with edge replication at the borders.
/// Double-precision accumulation in a fixed order: each window row summed
/// left to right, then the seven row partials summed top to bottom; rounded
/// half away from zero to 8 bits. The dense convolution oracle shares this
/// convention, so equality is exact.
GrayImage smooth(const GrayImage& src);

} // namespace rsslam
