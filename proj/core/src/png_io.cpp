#include "rsslam/png_io.hpp"

#include <bit>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include <png.h>

namespace rsslam {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, const char* what) {
    throw std::runtime_error("png: " + std::string(what) + ": " + path);
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

// Decodes to 8-bit interleaved channels; returns the channel count (1, 2, 3
// or 4) with palette/low-depth formats expanded.
std::vector<std::uint8_t> decode8(const std::string& path, int& width, int& height,
                                  int& channels) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) fail(path, "cannot open");

    PngReader reader;
    if (!reader.png || !reader.info) fail(path, "out of memory");
    if (setjmp(png_jmpbuf(reader.png))) fail(path, "decode error");

    png_init_io(reader.png, file.get());
    png_read_info(reader.png, reader.info);

    png_set_palette_to_rgb(reader.png);
    png_set_expand_gray_1_2_4_to_8(reader.png);
    if (png_get_bit_depth(reader.png, reader.info) == 16) png_set_strip_16(reader.png);
    png_read_update_info(reader.png, reader.info);

    width = static_cast<int>(png_get_image_width(reader.png, reader.info));
    height = static_cast<int>(png_get_image_height(reader.png, reader.info));
    channels = png_get_channels(reader.png, reader.info);
    if (width < 1 || height < 1) fail(path, "degenerate image");

    std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * channels);
    std::vector<png_bytep> rows(height);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) rows[y] = data.data() + y * stride;
    png_read_image(reader.png, rows.data());
    png_read_end(reader.png, nullptr);
    return data;
}

} // namespace

GrayImage read_png_gray(const std::string& path) {
    int width = 0, height = 0, channels = 0;
    const std::vector<std::uint8_t> raw = decode8(path, width, height, channels);

    std::vector<std::uint8_t> gray(static_cast<std::size_t>(width) * height);
    const std::size_t n = gray.size();
    if (channels == 1) {
        gray = raw;
    } else if (channels == 2) { // gray + alpha
        for (std::size_t i = 0; i < n; ++i) gray[i] = raw[2 * i];
    } else { // rgb / rgba: integer luma
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t* p = raw.data() + i * channels;
            gray[i] = static_cast<std::uint8_t>((77 * p[0] + 150 * p[1] + 29 * p[2]) >> 8);
        }
    }
    return GrayImage(width, height, std::move(gray));
}

Raster16 read_png_gray16(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) fail(path, "cannot open");

    PngReader reader;
    if (!reader.png || !reader.info) fail(path, "out of memory");
    if (setjmp(png_jmpbuf(reader.png))) fail(path, "decode error");

    png_init_io(reader.png, file.get());
    png_read_info(reader.png, reader.info);

    if (png_get_bit_depth(reader.png, reader.info) != 16 ||
        png_get_color_type(reader.png, reader.info) != PNG_COLOR_TYPE_GRAY)
        fail(path, "expected 16-bit grayscale");
    // PNG streams are big-endian; convert to host order on little-endian.
    if constexpr (std::endian::native == std::endian::little) png_set_swap(reader.png);
    png_read_update_info(reader.png, reader.info);

    Raster16 out;
    out.width = static_cast<int>(png_get_image_width(reader.png, reader.info));
    out.height = static_cast<int>(png_get_image_height(reader.png, reader.info));
    out.data.resize(static_cast<std::size_t>(out.width) * out.height);

    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(out.data.data() + static_cast<std::size_t>(y) * out.width);
    png_read_image(reader.png, rows.data());
    png_read_end(reader.png, nullptr);
    return out;
}

namespace {

void write_png(const std::string& path, int width, int height, int bit_depth, int color_type,
               const std::vector<png_bytep>& rows, bool swap) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) fail(path, "cannot open for writing");

    PngWriter writer;
    if (!writer.png || !writer.info) fail(path, "out of memory");
    if (setjmp(png_jmpbuf(writer.png))) fail(path, "encode error");

    png_init_io(writer.png, file.get());
    png_set_IHDR(writer.png, writer.info, width, height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(writer.png, writer.info);
    if (swap) png_set_swap(writer.png);
    png_write_image(writer.png, const_cast<png_bytepp>(rows.data()));
    png_write_end(writer.png, nullptr);
}

} // namespace

void write_png_gray(const GrayImage& img, const std::string& path) {
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y)
        rows[y] = const_cast<png_bytep>(img.row(y));
    write_png(path, img.width(), img.height(), 8, PNG_COLOR_TYPE_GRAY, rows, false);
}

void write_png_gray16(const Raster16& img, const std::string& path) {
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(img.data.data() + static_cast<std::size_t>(y) * img.width));
    write_png(path, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, rows,
              std::endian::native == std::endian::little);
}

void write_png_rgb(int width, int height, const std::vector<std::uint8_t>& rgb,
                   const std::string& path) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw std::invalid_argument("write_png_rgb: buffer size does not match dimensions");
    std::vector<png_bytep> rows(height);
    const std::size_t stride = static_cast<std::size_t>(width) * 3;
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(rgb.data() + y * stride);
    write_png(path, width, height, 8, PNG_COLOR_TYPE_RGB, rows, false);
}

} // namespace rsslam
