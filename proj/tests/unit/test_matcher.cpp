#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "rsslam/matcher.hpp"

using namespace rsslam;

namespace {

Descriptor256 random_descriptor(std::mt19937_64& rng) {
    Descriptor256 d;
    for (auto& b : d.bytes) b = static_cast<std::uint8_t>(rng());
    return d;
}

Descriptor256 flip_bits(Descriptor256 d, int count, std::mt19937_64& rng) {
    // flips exactly `count` distinct bits
    std::vector<int> bits(256);
    std::iota(bits.begin(), bits.end(), 0);
    std::shuffle(bits.begin(), bits.end(), rng);
    for (int i = 0; i < count; ++i) d.set_bit(bits[i], !d.bit(bits[i]));
    return d;
}

// O(n * m) double-loop reference matcher.
std::vector<MatchResult> match_oracle(const std::vector<Descriptor256>& a,
                                      const std::vector<Descriptor256>& b, int threshold) {
    std::vector<MatchResult> out;
    for (int i = 0; i < static_cast<int>(a.size()); ++i) {
        int best = 999, best_j = -1;
        for (int j = 0; j < static_cast<int>(b.size()); ++j) {
            int d = 0;
            for (int bit = 0; bit < 256; ++bit) d += a[i].bit(bit) != b[j].bit(bit);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j >= 0 && best <= threshold) out.push_back({i, best_j, best});
    }
    return out;
}

} // namespace

TEST_SUITE_BEGIN("matcher");

TEST_CASE("hamming endpoints") {
    std::mt19937_64 rng(1);
    const Descriptor256 a = random_descriptor(rng);
    CHECK(hamming(a, a) == 0);

    Descriptor256 complement = a;
    for (auto& b : complement.bytes) b = static_cast<std::uint8_t>(~b);
    CHECK(hamming(a, complement) == 256);

    Descriptor256 one = a;
    one.set_bit(137, !one.bit(137));
    CHECK(hamming(a, one) == 1);
}

TEST_CASE("hamming is a metric") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        const Descriptor256 a = random_descriptor(rng);
        const Descriptor256 b = random_descriptor(rng);
        const Descriptor256 c = random_descriptor(rng);
        CHECK(hamming(a, b) == hamming(b, a));
        CHECK((hamming(a, b) == 0) == (a == b));
        CHECK(hamming(a, c) <= hamming(a, b) + hamming(b, c));
    }
}

TEST_CASE("match picks the minimum-distance map descriptor") {
    std::mt19937_64 rng(3);
    const Descriptor256 probe = random_descriptor(rng);
    const std::vector<Descriptor256> map_desc = {flip_bits(probe, 40, rng), flip_bits(probe, 7, rng),
                                                 flip_bits(probe, 200, rng)};
    const auto matches = match({probe}, map_desc, 64);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].feature_index == 0);
    CHECK(matches[0].map_index == 1);
    CHECK(matches[0].distance == 7);
}

TEST_CASE("empty map gives an empty result") {
    std::mt19937_64 rng(4);
    CHECK(match({random_descriptor(rng)}, {}, 64).empty());
}

TEST_CASE("threshold gates weak matches") {
    std::mt19937_64 rng(5);
    const Descriptor256 probe = random_descriptor(rng);
    const std::vector<Descriptor256> map_desc = {flip_bits(probe, 120, rng)};
    CHECK(match({probe}, map_desc, 64).empty());
    CHECK(match({probe}, map_desc, 256).size() == 1); // gate disabled
}

TEST_CASE("ties go to the lowest map index") {
    std::mt19937_64 rng(6);
    const Descriptor256 probe = random_descriptor(rng);
    Descriptor256 flip_hi = probe, flip_lo = probe;
    flip_hi.set_bit(250, !flip_hi.bit(250));
    flip_lo.set_bit(3, !flip_lo.bit(3));
    const auto matches = match({probe}, {flip_hi, flip_lo}, 64);
    REQUIRE(matches.size() == 1);
    CHECK(matches[0].map_index == 0);
    CHECK(matches[0].distance == 1);
}

TEST_CASE("match equals the double-loop popcount oracle") {
    std::mt19937_64 rng(7);
    for (int threshold : {64, 256}) {
        std::vector<Descriptor256> frame, map_desc;
        for (int i = 0; i < 60; ++i) frame.push_back(random_descriptor(rng));
        for (int j = 0; j < 40; ++j) map_desc.push_back(random_descriptor(rng));
        // plant some near-duplicates so the threshold actually admits matches
        for (int i = 0; i < 20; ++i) frame[i] = flip_bits(map_desc[i % map_desc.size()], i, rng);

        const auto ours = match(frame, map_desc, threshold);
        const auto expected = match_oracle(frame, map_desc, threshold);
        REQUIRE(ours.size() == expected.size());
        for (std::size_t i = 0; i < ours.size(); ++i) {
            CHECK(ours[i].feature_index == expected[i].feature_index);
            CHECK(ours[i].map_index == expected[i].map_index);
            CHECK(ours[i].distance == expected[i].distance);
        }
    }
}

TEST_SUITE_END();
