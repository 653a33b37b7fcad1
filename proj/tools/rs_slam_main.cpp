#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsslam/brief_pattern.hpp"
#include "rsslam/config.hpp"
#include "rsslam/evaluation.hpp"
#include "rsslam/matcher.hpp"
#include "rsslam/orb_extractor.hpp"
#include "rsslam/pipeline.hpp"
#include "rsslam/png_io.hpp"
#include "rsslam/trajectory.hpp"
#include "rsslam/tum_dataset.hpp"

namespace fs = std::filesystem;
using namespace rsslam;

namespace {

SlamConfig load_config_or_default(const std::string& path) {
    return path.empty() ? SlamConfig{} : load_config(path);
}

RsBriefPattern pattern_for(const SlamConfig& config) {
    return config.pattern_file.empty() ? canonical_pattern() : load_pattern(config.pattern_file);
}

void write_keypoints_csv(std::ostream& out, const std::vector<Feature>& features) {
    out << "x,y,layer,score,orientation,descriptor_hex\n";
    char buf[128];
    for (const auto& f : features) {
        std::snprintf(buf, sizeof buf, "%.3f,%.3f,%d,%.6g,%d,", f.x, f.y, f.layer, f.score,
                      f.orientation);
        out << buf << to_hex(f.descriptor) << '\n';
    }
}

std::vector<Descriptor256> read_keypoints_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open keypoints file " + path);
    std::vector<Descriptor256> descriptors;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.starts_with("x,")) continue;
        const auto last_comma = line.rfind(',');
        if (last_comma == std::string::npos || last_comma + 65 != line.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected a 64-character descriptor_hex last column");
        descriptors.push_back(descriptor_from_hex(line.substr(last_comma + 1)));
    }
    return descriptors;
}

int cmd_run(const std::string& dataset, const std::string& config_path, const std::string& out_dir,
            bool sequential, std::optional<std::uint64_t> seed, const std::string& map_out) {
    SlamConfig config = load_config_or_default(config_path);
    if (seed) config.seed = *seed;

    fs::create_directories(out_dir);
    auto entries = load_sequence_index(dataset);
    if (entries.empty()) throw std::runtime_error("no associated rgb/depth pairs in " + dataset);
    std::printf("loaded %zu associated frames from %s\n", entries.size(), dataset.c_str());

    RunOptions options;
    options.sequential = sequential;
    const RunOutput output = run_sequence(
        make_frame_source(std::move(entries), config.intrinsics.depth_scale), config, options);

    write_trajectory(output.trajectory, out_dir + "/trajectory.txt");
    write_timings_csv(output.results, out_dir + "/timings.csv");
    const RunStats stats = collect_stats(output.results);
    {
        std::ofstream summary(out_dir + "/summary.txt");
        summary << format_stats(stats);
    }
    if (!map_out.empty()) output.map.write_csv(map_out);

    std::printf("%s", format_stats(stats).c_str());
    std::printf("wrote %s/{trajectory.txt,timings.csv,summary.txt}\n", out_dir.c_str());
    return 0;
}

int cmd_extract(const std::string& image, const std::string& config_path, const std::string& out) {
    const SlamConfig config = load_config_or_default(config_path);
    const RsBriefPattern pattern = pattern_for(config);
    const GrayImage gray = read_png_gray(image);
    const ImagePyramid pyramid = build_pyramid(gray, config.n_layers, config.scale_factor);
    const std::vector<Feature> features = extract(pyramid, config.extractor, pattern);

    if (out.empty()) {
        write_keypoints_csv(std::cout, features);
    } else {
        std::ofstream file(out);
        if (!file) throw std::runtime_error("cannot open " + out);
        write_keypoints_csv(file, features);
    }
    std::fprintf(stderr, "extracted %zu features from %s\n", features.size(), image.c_str());
    return 0;
}

int cmd_match(const std::string& a, const std::string& b, int threshold, const std::string& out) {
    const std::vector<Descriptor256> desc_a = read_keypoints_csv(a);
    const std::vector<Descriptor256> desc_b = read_keypoints_csv(b);
    const std::vector<MatchResult> matches = match(desc_a, desc_b, threshold);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file.open(out);
        if (!file) throw std::runtime_error("cannot open " + out);
        os = &file;
    }
    *os << "index_a,index_b,distance\n";
    for (const auto& m : matches)
        *os << m.feature_index << ',' << m.map_index << ',' << m.distance << '\n';
    std::fprintf(stderr, "%zu of %zu descriptors matched\n", matches.size(), desc_a.size());
    return 0;
}

int cmd_eval(const std::string& est_path, const std::string& gt_path, const std::string& plot) {
    const Trajectory est = read_trajectory(est_path);
    const Trajectory gt = load_ground_truth(gt_path);
    const double rmse = ate_rmse(est, gt);
    if (!plot.empty()) plot_trajectory(est, gt, plot);
    std::printf("ATE_RMSE_m=%.6f\n", rmse);
    return 0;
}

int cmd_bench(const std::string& dataset, const std::string& config_path, int max_frames,
              bool sequential) {
    SlamConfig config = load_config_or_default(config_path);
    auto entries = load_sequence_index(dataset);
    if (entries.empty()) throw std::runtime_error("no associated rgb/depth pairs in " + dataset);
    if (max_frames > 0 && static_cast<int>(entries.size()) > max_frames)
        entries.resize(max_frames);
    std::printf("benchmarking %zu frames from %s\n", entries.size(), dataset.c_str());

    RunOptions options;
    options.sequential = sequential;
    const RunOutput output = run_sequence(
        make_frame_source(std::move(entries), config.intrinsics.depth_scale), config, options);
    std::printf("%s", format_stats(collect_stats(output.results)).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RS-BRIEF RGB-D SLAM: tracking, feature tools and evaluation"};
    app.require_subcommand(1);

    std::string dataset, config_path, out_dir, image, csv_a, csv_b, est_path, gt_path;
    std::string plot_path, out_file, map_out;
    bool sequential = false;
    int threshold = 64;
    int max_frames = 0;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Track a TUM-format RGB-D sequence");
    run->add_option("--dataset", dataset, "sequence directory")->required();
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_flag("--sequential", sequential, "disable pipelining (reference mode)");
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--map-out", map_out, "dump the final map as CSV");

    auto* extract_cmd = app.add_subcommand("extract", "Extract features from one PNG image");
    extract_cmd->add_option("--image", image, "input image (PNG)")->required();
    extract_cmd->add_option("--config", config_path, "key = value config file");
    extract_cmd->add_option("--out", out_file, "keypoints CSV (default: stdout)");

    auto* match_cmd = app.add_subcommand("match", "Match two keypoint CSV files");
    match_cmd->add_option("--a", csv_a, "keypoints CSV")->required();
    match_cmd->add_option("--b", csv_b, "keypoints CSV")->required();
    match_cmd->add_option("--threshold", threshold, "accept threshold in bits (256 disables)");
    match_cmd->add_option("--out", out_file, "matches CSV (default: stdout)");

    auto* eval_cmd = app.add_subcommand("eval", "Trajectory error against ground truth");
    eval_cmd->add_option("--est", est_path, "estimated trajectory")->required();
    eval_cmd->add_option("--gt", gt_path, "ground-truth trajectory")->required();
    eval_cmd->add_option("--plot", plot_path, "write an SVG overlay plot");

    auto* bench = app.add_subcommand("bench", "Stage breakdown and frame-rate report");
    bench->add_option("--dataset", dataset, "sequence directory")->required();
    bench->add_option("--config", config_path, "key = value config file");
    bench->add_option("--frames", max_frames, "cap the number of frames");
    bench->add_flag("--sequential", sequential, "disable pipelining");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(dataset, config_path, out_dir, sequential, seed, map_out);
        if (extract_cmd->parsed()) return cmd_extract(image, config_path, out_file);
        if (match_cmd->parsed()) return cmd_match(csv_a, csv_b, threshold, out_file);
        if (eval_cmd->parsed()) return cmd_eval(est_path, gt_path, plot_path);
        if (bench->parsed()) return cmd_bench(dataset, config_path, max_frames, sequential);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rs-slam: %s\n", e.what());
        return 1;
    }
    return 0;
}
