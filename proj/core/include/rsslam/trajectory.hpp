#pragma once

#include <string>
#include <vector>

#include "rsslam/se3.hpp"

namespace rsslam {

/// One trajectory sample. The pose is stored in the file convention,
/// camera -> world: the translation is the camera position in the world
/// frame, as TUM trajectory files record it.
struct TrajectorySample {
    double timestamp = 0.0;
    PoseSE3 pose_cw;
};

/// Ordered pose samples with strictly increasing timestamps.
class Trajectory {
public:
    Trajectory() = default;

    /// Throws std::invalid_argument when the timestamp does not increase.
    void append(double timestamp, const PoseSE3& pose_cw);

    const std::vector<TrajectorySample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }

private:
    std::vector<TrajectorySample> samples_;
};

/// TUM text format: "timestamp tx ty tz qx qy qz qw", one sample per line,
/// '#' comment lines skipped. Timestamps carry 9 decimals and pose values 12,
/// which round-trips poses to well below 1e-9.
void write_trajectory(const Trajectory& traj, const std::string& path);

/// Parses the TUM format. Quaternions are normalized after parsing; a
/// malformed or non-monotonic line raises std::runtime_error with its line
/// number.
Trajectory read_trajectory(const std::string& path);

} // namespace rsslam
