#include "synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "rsslam/png_io.hpp"

namespace fs = std::filesystem;

namespace rsslam::testsupport {

namespace {

std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t cell_hash(std::uint64_t seed, int plane, long cx, long cy, int octave) {
    std::uint64_t h = seed;
    h = mix(h ^ static_cast<std::uint64_t>(plane + 1));
    h = mix(h ^ static_cast<std::uint64_t>(octave + 11));
    h = mix(h ^ static_cast<std::uint64_t>(cx + 100003));
    h = mix(h ^ static_cast<std::uint64_t>(cy + 200003));
    return h;
}

} // namespace

BoxScene::BoxScene(std::uint64_t seed) : seed_(seed) {
    // Room around the origin: back wall, floor, two side walls.
    planes_.push_back({{0, 0, 3.2}, {0, 0, -1}, {1, 0, 0}, {0, 1, 0}, 6.0, 0});
    planes_.push_back({{0, 1.2, 0}, {0, -1, 0}, {1, 0, 0}, {0, 0, 1}, 6.0, 1});
    planes_.push_back({{1.8, 0, 0}, {-1, 0, 0}, {0, 0, 1}, {0, 1, 0}, 6.0, 2});
    planes_.push_back({{-1.8, 0, 0}, {1, 0, 0}, {0, 0, 1}, {0, 1, 0}, 6.0, 3});
}

std::uint8_t BoxScene::texture(int plane_id, double u, double v) const {
    // Two octaves of hard-edged blocks: 8 cm and 32 cm cells. Corner density
    // at a few meters then lands in the range of real indoor footage.
    const long fx = static_cast<long>(std::floor(u / 0.08));
    const long fy = static_cast<long>(std::floor(v / 0.08));
    const long cx = static_cast<long>(std::floor(u / 0.32));
    const long cy = static_cast<long>(std::floor(v / 0.32));
    const unsigned fine = cell_hash(seed_, plane_id, fx, fy, 0) & 0xff;
    const unsigned coarse = cell_hash(seed_, plane_id, cx, cy, 1) & 0xff;
    return static_cast<std::uint8_t>(16 + (fine * 2 + coarse) * 224 / (3 * 255));
}

void BoxScene::render(const PoseSE3& pose_wc, const CameraIntrinsics& K, int width, int height,
                      GrayImage& gray, std::vector<float>& depth) const {
    gray = GrayImage(width, height);
    depth.assign(static_cast<std::size_t>(width) * height, 0.0f);

    const Eigen::Vector3d center = pose_wc.center();
    const Eigen::Matrix3d cam_to_world = pose_wc.rotation.transpose();

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            // Direction with camera z = 1, so the ray parameter is the depth.
            const Eigen::Vector3d dir_cam((x - K.cx) / K.fx, (y - K.cy) / K.fy, 1.0);
            const Eigen::Vector3d dir = cam_to_world * dir_cam;

            double best_t = std::numeric_limits<double>::infinity();
            const Plane* hit = nullptr;
            double hit_u = 0.0, hit_v = 0.0;
            for (const auto& plane : planes_) {
                const double denom = dir.dot(plane.normal);
                if (std::abs(denom) < 1e-9) continue;
                const double t = (plane.origin - center).dot(plane.normal) / denom;
                if (t < 0.05 || t >= best_t) continue;
                const Eigen::Vector3d point = center + t * dir;
                const double pu = (point - plane.origin).dot(plane.u_axis);
                const double pv = (point - plane.origin).dot(plane.v_axis);
                if (std::abs(pu) > plane.extent || std::abs(pv) > plane.extent) continue;
                best_t = t;
                hit = &plane;
                hit_u = pu;
                hit_v = pv;
            }

            if (hit) {
                gray.at(x, y) = texture(hit->id, hit_u, hit_v);
                depth[static_cast<std::size_t>(y) * width + x] = static_cast<float>(best_t);
            } else {
                gray.at(x, y) = 8;
            }
        }
    }
}

PoseSE3 wiggle_pose(double t) {
    const Eigen::Vector3d camera_center(0.16 * std::sin(0.9 * t), 0.10 * std::sin(1.3 * t + 0.4),
                                        0.12 * (1.0 - std::cos(0.7 * t)));
    const double yaw = 0.06 * std::sin(0.8 * t + 0.2);
    const double pitch = 0.04 * std::sin(1.1 * t + 1.0);
    const Eigen::Matrix3d cam_to_world(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()) *
                                       Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitX()));
    // world -> camera
    return PoseSE3{cam_to_world.transpose(), -(cam_to_world.transpose() * camera_center)};
}

Trajectory write_tum_sequence(const std::string& dir, const BoxScene& scene,
                              const CameraIntrinsics& K, int width, int height, int n_frames,
                              double fps) {
    fs::create_directories(dir + "/rgb");
    fs::create_directories(dir + "/depth");

    std::ofstream rgb_index(dir + "/rgb.txt");
    std::ofstream depth_index(dir + "/depth.txt");
    rgb_index << "# color images\n# timestamp filename\n";
    depth_index << "# depth images\n# timestamp filename\n";

    Trajectory ground_truth;
    GrayImage gray;
    std::vector<float> depth;
    char name[64];

    for (int i = 0; i < n_frames; ++i) {
        const double t_rgb = 100.0 + i / fps;
        const double t_depth = t_rgb + 0.005;
        const PoseSE3 pose_wc = wiggle_pose(i / fps);
        scene.render(pose_wc, K, width, height, gray, depth);

        std::snprintf(name, sizeof name, "rgb/%.6f.png", t_rgb);
        std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
        for (std::size_t p = 0; p < gray.data().size(); ++p)
            rgb[3 * p] = rgb[3 * p + 1] = rgb[3 * p + 2] = gray.data()[p];
        write_png_rgb(width, height, rgb, dir + "/" + name);
        char ts[32];
        std::snprintf(ts, sizeof ts, "%.6f", t_rgb);
        rgb_index << ts << ' ' << name << '\n';

        std::snprintf(name, sizeof name, "depth/%.6f.png", t_depth);
        Raster16 raw;
        raw.width = width;
        raw.height = height;
        raw.data.resize(depth.size());
        for (std::size_t p = 0; p < depth.size(); ++p)
            raw.data[p] = static_cast<std::uint16_t>(std::lround(depth[p] * K.depth_scale));
        write_png_gray16(raw, dir + "/" + name);
        std::snprintf(ts, sizeof ts, "%.6f", t_depth);
        depth_index << ts << ' ' << name << '\n';

        ground_truth.append(t_rgb, pose_wc.inverse());
    }

    std::ofstream gt(dir + "/groundtruth.txt");
    gt << "# ground truth trajectory\n";
    char line[256];
    for (const auto& s : ground_truth.samples()) {
        const Eigen::Quaterniond q(s.pose_cw.rotation);
        std::snprintf(line, sizeof line, "%.6f %.9f %.9f %.9f %.9f %.9f %.9f %.9f\n", s.timestamp,
                      s.pose_cw.translation.x(), s.pose_cw.translation.y(),
                      s.pose_cw.translation.z(), q.x(), q.y(), q.z(), q.w());
        gt << line;
    }
    return ground_truth;
}

GrayImage random_image(int width, int height, std::uint64_t seed) {
    GrayImage img(width, height);
    std::mt19937_64 rng(seed);
    for (auto& p : img.data()) p = static_cast<std::uint8_t>(rng() & 0xff);
    return img;
}

} // namespace rsslam::testsupport
