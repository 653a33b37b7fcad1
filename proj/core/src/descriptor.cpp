#include "rsslam/descriptor.hpp"

#include <stdexcept>

namespace rsslam {

Descriptor256 rotate_descriptor(const Descriptor256& desc, int n) {
    if (n < 0 || n >= 32)
        throw std::invalid_argument("rotate_descriptor: orientation label must be in [0, 31]");
    Descriptor256 out;
    for (int j = 0; j < 32; ++j) out.bytes[j] = desc.bytes[(j + n) & 31];
    return out;
}

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

std::string to_hex(const Descriptor256& desc) {
    std::string out;
    out.reserve(64);
    for (std::uint8_t b : desc.bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

Descriptor256 descriptor_from_hex(const std::string& hex) {
    if (hex.size() != 64)
        throw std::invalid_argument("descriptor_from_hex: expected 64 hex characters");
    Descriptor256 out;
    for (int i = 0; i < 32; ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("descriptor_from_hex: invalid hex character");
        out.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

} // namespace rsslam
