#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace rsslam {

/// 256-bit binary descriptor. Bit i is the outcome of test pair i of the
/// sampling pattern. Bits are stored byte-addressable: bit i lives in byte
/// i / 8 at position i % 8 (LSB first), so an 8-bit group of tests is one byte.
struct Descriptor256 {
    std::array<std::uint8_t, 32> bytes{};

    bool bit(int i) const { return (bytes[i >> 3] >> (i & 7)) & 1; }
    void set_bit(int i, bool v) {
        if (v)
            bytes[i >> 3] |= static_cast<std::uint8_t>(1u << (i & 7));
        else
            bytes[i >> 3] &= static_cast<std::uint8_t>(~(1u << (i & 7)));
    }

    bool operator==(const Descriptor256&) const = default;
};

/// Cyclic left rotation of the 256-bit string by 8 * n bits: the first 8n bits
/// move to the end. With LSB-first byte packing this is a pure byte
/// permutation, out[j] = in[(j + n) % 32]. n must be in [0, 31].
Descriptor256 rotate_descriptor(const Descriptor256& desc, int n);

/// 64-character lowercase hex string, byte 0 first, high nibble first.
std::string to_hex(const Descriptor256& desc);

/// Parses the format produced by to_hex. Throws std::invalid_argument on
/// malformed input.
Descriptor256 descriptor_from_hex(const std::string& hex);

} // namespace rsslam
