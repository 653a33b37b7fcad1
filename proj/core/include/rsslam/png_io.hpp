#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsslam/image.hpp"

namespace rsslam {

/// 16-bit raster, row-major; used for raw depth images.
struct Raster16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> data;

    std::uint16_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Decodes an 8-bit PNG to grayscale. RGB(A) input is converted with the
/// integer luma (77 R + 150 G + 29 B) >> 8; gray(A) input passes through.
/// Throws std::runtime_error naming the file on any decode problem.
GrayImage read_png_gray(const std::string& path);

/// Decodes a 16-bit grayscale PNG (the TUM depth format) to host-order
/// values. Throws std::runtime_error naming the file on any decode problem.
Raster16 read_png_gray16(const std::string& path);

void write_png_gray(const GrayImage& img, const std::string& path);
void write_png_gray16(const Raster16& img, const std::string& path);

/// Writes an 8-bit RGB PNG from three interleaved channels (r, g, b per pixel).
void write_png_rgb(int width, int height, const std::vector<std::uint8_t>& rgb,
                   const std::string& path);

} // namespace rsslam
