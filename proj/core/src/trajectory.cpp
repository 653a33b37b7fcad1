#include "rsslam/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Geometry>

namespace rsslam {

void Trajectory::append(double timestamp, const PoseSE3& pose_cw) {
    if (!samples_.empty() && timestamp <= samples_.back().timestamp)
        throw std::invalid_argument("Trajectory::append: timestamps must strictly increase");
    samples_.push_back({timestamp, pose_cw});
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trajectory: cannot open " + path);
    out << "# timestamp tx ty tz qx qy qz qw\n";
    char line[256];
    for (const auto& s : traj.samples()) {
        const Eigen::Quaterniond q(s.pose_cw.rotation);
        const Eigen::Vector3d& t = s.pose_cw.translation;
        std::snprintf(line, sizeof line, "%.9f %.12f %.12f %.12f %.12f %.12f %.12f %.12f\n", s.timestamp,
                      t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
        out << line;
    }
    if (!out) throw std::runtime_error("write_trajectory: write failed for " + path);
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_trajectory: cannot open " + path);

    Trajectory traj;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double t, tx, ty, tz, qx, qy, qz, qw;
        if (!(ls >> t >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed trajectory line");
        Eigen::Quaterniond q(qw, qx, qy, qz);
        if (q.norm() < 1e-9)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": quaternion has zero norm");
        try {
            traj.append(t, pose_from_quaternion(q, {tx, ty, tz}));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": timestamps must strictly increase");
        }
    }
    return traj;
}

} // namespace rsslam
