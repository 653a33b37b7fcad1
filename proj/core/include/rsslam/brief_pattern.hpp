#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace rsslam {

/// A test-location offset relative to the feature center, in pixels.
/// Coordinates stay real-valued; rounding to the pixel grid happens only when
/// an image is sampled.
struct PatternPoint {
    double x = 0.0;
    double y = 0.0;
};

inline constexpr int kPatternSeeds = 8;
inline constexpr int kPatternRotations = 32;
inline constexpr int kPatternTests = kPatternSeeds * kPatternRotations;
inline constexpr double kPatternRadius = 15.0;

/// Angle of rotation label n: n * 11.25 degrees, in radians.
double label_angle(int n);

/// 32-fold rotationally symmetric sampling pattern. Two seed sets of 8
/// Gaussian-drawn offsets are rotated through the 32 multiples of 11.25
/// degrees; the expanded sets are laid out rotation-major, so test index
/// i = 8 * rotation + seed. Rotating the whole pattern by one label then
/// amounts to shifting the descriptor by 8 bits.
struct RsBriefPattern {
    std::array<PatternPoint, kPatternSeeds> seed_s{};
    std::array<PatternPoint, kPatternSeeds> seed_d{};
    std::array<PatternPoint, kPatternTests> expanded_s{};
    std::array<PatternPoint, kPatternTests> expanded_d{};
};

/// Draws the 8+8 seed offsets i.i.d. Gaussian (sigma = 6 per axis), rejection
/// sampled to magnitude <= 15, and expands them through the 32 rotation
/// labels. The generator is a Box-Muller transform over std::mt19937_64
/// draws, so the result is identical on every conforming platform.
RsBriefPattern generate_pattern(std::uint64_t rng_seed);

/// Seed of the pattern committed to core/data/rs_brief_pattern.txt.
inline constexpr std::uint64_t kCanonicalPatternSeed = 0x52534252494546ull; // "RSBRIEF"

/// The committed pattern every descriptor in this project uses. Generated
/// once from kCanonicalPatternSeed; tests pin it against the data file so it
/// cannot drift silently.
const RsBriefPattern& canonical_pattern();

/// Text format: 512 lines of "set rotation_index x y" where set is 's' or
/// 'd', rotation_index is 0..31 and x, y are printed with 17 significant
/// digits (lossless double round trip). Lines are ordered s-set first,
/// rotation-major, seed order within each rotation.
void save_pattern(const RsBriefPattern& pattern, const std::string& path);
void write_pattern(const RsBriefPattern& pattern, std::ostream& out);

/// Parses the save_pattern format and validates counts, labels and the
/// magnitude bound. Throws std::runtime_error naming the offending line.
RsBriefPattern load_pattern(const std::string& path);
RsBriefPattern read_pattern(std::istream& in, const std::string& name = "<stream>");

} // namespace rsslam
