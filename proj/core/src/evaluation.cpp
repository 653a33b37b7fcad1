#include "rsslam/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace rsslam {

std::vector<std::pair<int, int>> associate_trajectories(const Trajectory& est, const Trajectory& gt,
                                                        double window) {
    struct Candidate {
        double dt;
        int est_index;
        int gt_index;
    };
    std::vector<Candidate> candidates;
    for (int i = 0; i < static_cast<int>(est.size()); ++i)
        for (int j = 0; j < static_cast<int>(gt.size()); ++j) {
            const double dt = std::abs(est[i].timestamp - gt[j].timestamp);
            if (dt <= window) candidates.push_back({dt, i, j});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dt != b.dt) return a.dt < b.dt;
        return a.est_index != b.est_index ? a.est_index < b.est_index : a.gt_index < b.gt_index;
    });

    std::vector<char> est_used(est.size(), 0), gt_used(gt.size(), 0);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& c : candidates) {
        if (est_used[c.est_index] || gt_used[c.gt_index]) continue;
        est_used[c.est_index] = gt_used[c.gt_index] = 1;
        pairs.emplace_back(c.est_index, c.gt_index);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

namespace {

// Cyclic Jacobi eigensolver for a symmetric 4x4 matrix. Rotations with an
// exactly zero off-diagonal pivot are skipped, which keeps decoupled
// components decoupled: for identical point sets the skew entries of Horn's N
// matrix cancel bitwise, the identity quaternion stays an exact eigenvector
// and the alignment residual is exactly zero.
void jacobi_eigen4(Eigen::Matrix4d a, Eigen::Vector4d& eigenvalues, Eigen::Matrix4d& vectors) {
    vectors.setIdentity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += a(p, q) * a(p, q);
        if (off == 0.0) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
                rot(p, p) = c;
                rot(q, q) = c;
                rot(p, q) = s;
                rot(q, p) = -s;
                a = rot.transpose() * a * rot;
                a(p, q) = a(q, p) = 0.0;
                vectors = vectors * rot;
            }
    }
    eigenvalues = a.diagonal();
}

} // namespace

PoseSE3 align_umeyama(const Trajectory& est, const Trajectory& gt, double window) {
    const auto pairs = associate_trajectories(est, gt, window);
    if (pairs.size() < 3)
        throw std::runtime_error("align_umeyama: need at least 3 associated pairs, have " +
                                 std::to_string(pairs.size()));

    Eigen::Vector3d mean_est = Eigen::Vector3d::Zero();
    Eigen::Vector3d mean_gt = Eigen::Vector3d::Zero();
    for (const auto& [i, j] : pairs) {
        mean_est += est[i].pose_cw.translation;
        mean_gt += gt[j].pose_cw.translation;
    }
    mean_est /= static_cast<double>(pairs.size());
    mean_gt /= static_cast<double>(pairs.size());

    // Horn's closed-form unit-quaternion solution. Unlike the SVD route it
    // cannot produce a reflection, so no determinant sign fix is needed, and
    // rank-deficient (collinear) configurations still yield a proper rotation.
    Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
    for (const auto& [i, j] : pairs)
        s += (est[i].pose_cw.translation - mean_est) *
             (gt[j].pose_cw.translation - mean_gt).transpose();

    Eigen::Matrix4d n;
    n << s(0, 0) + s(1, 1) + s(2, 2), s(1, 2) - s(2, 1), s(2, 0) - s(0, 2), s(0, 1) - s(1, 0), //
        s(1, 2) - s(2, 1), s(0, 0) - s(1, 1) - s(2, 2), s(0, 1) + s(1, 0), s(2, 0) + s(0, 2),  //
        s(2, 0) - s(0, 2), s(0, 1) + s(1, 0), -s(0, 0) + s(1, 1) - s(2, 2), s(1, 2) + s(2, 1), //
        s(0, 1) - s(1, 0), s(2, 0) + s(0, 2), s(1, 2) + s(2, 1), -s(0, 0) - s(1, 1) + s(2, 2);

    Eigen::Vector4d eigenvalues;
    Eigen::Matrix4d vectors;
    jacobi_eigen4(n, eigenvalues, vectors);
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (eigenvalues[i] > eigenvalues[best]) best = i;

    const Eigen::Quaterniond q(vectors(0, best), vectors(1, best), vectors(2, best),
                               vectors(3, best));
    const Eigen::Matrix3d rotation = q.toRotationMatrix();
    return {rotation, mean_gt - rotation * mean_est};
}

double ate_rmse(const Trajectory& est, const Trajectory& gt, double window) {
    const PoseSE3 alignment = align_umeyama(est, gt, window);
    const auto pairs = associate_trajectories(est, gt, window);
    double sum = 0.0;
    for (const auto& [i, j] : pairs)
        sum += (gt[j].pose_cw.translation - alignment * est[i].pose_cw.translation).squaredNorm();
    return std::sqrt(sum / static_cast<double>(pairs.size()));
}

namespace {

struct Bounds {
    double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
    bool any = false;

    void update(const Trajectory& traj) {
        for (const auto& s : traj.samples()) {
            const double x = s.pose_cw.translation.x();
            const double y = s.pose_cw.translation.y();
            if (!any) {
                min_x = max_x = x;
                min_y = max_y = y;
                any = true;
            } else {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
        }
    }
};

void write_polyline(std::ofstream& out, const Trajectory& traj, const Bounds& b, double sx,
                    double sy, double pad, const char* color) {
    if (traj.empty()) return;
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& s : traj.samples()) {
        const double px = pad + (s.pose_cw.translation.x() - b.min_x) * sx;
        const double py = pad + (s.pose_cw.translation.y() - b.min_y) * sy;
        out << px << ',' << py << ' ';
    }
    out << "\"/>\n";
}

} // namespace

void plot_trajectory(const Trajectory& est, const Trajectory& gt, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("plot_trajectory: cannot open " + path);

    constexpr double kSize = 640.0;
    constexpr double kPad = 40.0;

    Bounds b;
    b.update(est);
    b.update(gt);
    const double span_x = std::max(b.max_x - b.min_x, 1e-9);
    const double span_y = std::max(b.max_y - b.min_y, 1e-9);
    const double scale = (kSize - 2 * kPad) / std::max(span_x, span_y);

    out.precision(3);
    out << std::fixed;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
        << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
        << "  <rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kSize - 2 * kPad
        << "\" height=\"" << kSize - 2 * kPad << "\" fill=\"white\" stroke=\"#888\"/>\n";

    write_polyline(out, gt, b, scale, scale, kPad, "#202020");
    write_polyline(out, est, b, scale, scale, kPad, "#d62728");

    // Scale bar: one tenth of the larger span, rendered bottom left.
    const double bar_m = std::max(span_x, span_y) / 10.0;
    const double bar_px = bar_m * scale;
    out << "  <line x1=\"" << kPad << "\" y1=\"" << kSize - kPad / 2 << "\" x2=\"" << kPad + bar_px
        << "\" y2=\"" << kSize - kPad / 2 << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
        << "  <text x=\"" << kPad + bar_px + 6 << "\" y=\"" << kSize - kPad / 2 + 4
        << "\" font-size=\"12\">" << bar_m << " m</text>\n"
        << "  <text x=\"" << kPad << "\" y=\"" << kPad - 18
        << "\" font-size=\"13\" fill=\"#202020\">ground truth</text>\n"
        << "  <text x=\"" << kPad + 110 << "\" y=\"" << kPad - 18
        << "\" font-size=\"13\" fill=\"#d62728\">estimated</text>\n"
        << "  <text x=\"" << kPad << "\" y=\"" << kSize - kPad / 2 + 20
        << "\" font-size=\"11\">world XY</text>\n"
        << "</svg>\n";
    if (!out) throw std::runtime_error("plot_trajectory: write failed for " + path);
}

} // namespace rsslam
