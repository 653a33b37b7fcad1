#include "rsslam/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rsslam/brief_pattern.hpp"
#include "rsslam/matcher.hpp"
#include "rsslam/orb_extractor.hpp"
#include "rsslam/pose_estimation.hpp"

namespace rsslam {

const char* stage_name(Stage stage) {
    switch (stage) {
        case Stage::FE: return "FE";
        case Stage::FM: return "FM";
        case Stage::PE: return "PE";
        case Stage::PO: return "PO";
        case Stage::MU: return "MU";
    }
    return "?";
}

FrameSource make_frame_source(std::vector<RgbdFrame> frames) {
    auto state = std::make_shared<std::pair<std::vector<RgbdFrame>, std::size_t>>(
        std::move(frames), 0);
    return [state]() -> std::optional<RgbdFrame> {
        if (state->second >= state->first.size()) return std::nullopt;
        return std::move(state->first[state->second++]);
    };
}

FrameSource make_frame_source(std::vector<SequenceEntry> entries, double depth_scale) {
    auto state = std::make_shared<std::pair<std::vector<SequenceEntry>, std::size_t>>(
        std::move(entries), 0);
    return [state, depth_scale]() -> std::optional<RgbdFrame> {
        if (state->second >= state->first.size()) return std::nullopt;
        return load_frame(state->first[state->second++], depth_scale);
    };
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t frame) {
    // splitmix64 step over seed + frame
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (frame + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Front-end product handed to the back end.
struct FrontEndResult {
    int frame_index = 0;
    double timestamp = 0.0;
    std::vector<Feature> features;
    std::vector<float> depth;
    int depth_width = 0;
    int depth_height = 0;
    std::vector<MatchResult> matches; // indices into the snapshot == map
    std::vector<Correspondence> corrs;
    double fe_ms = 0.0;
    double fm_ms = 0.0;
};

class PipelineRunner {
public:
    PipelineRunner(const SlamConfig& config, const RunOptions& options)
        : config_(config),
          options_(options),
          pattern_(config.pattern_file.empty() ? canonical_pattern()
                                               : load_pattern(config.pattern_file)),
          origin_(Clock::now()) {
        output_.map.set_soft_cap(config.map_soft_cap);
    }

    RunOutput run(const FrameSource& source) {
        if (options_.sequential) {
            int frame_index = 0;
            for (std::optional<RgbdFrame> frame = source(); frame; frame = source())
                back_end(front_end(frame_index++, std::move(*frame)));
        } else {
            run_pipelined(source);
        }
        return std::move(output_);
    }

private:
    void record(int frame, Stage stage, bool begin) {
        if (!options_.trace) return;
        const double t = std::chrono::duration<double>(Clock::now() - origin_).count();
        std::lock_guard lock(trace_mutex_);
        options_.trace->push_back({frame, stage, begin, t});
    }

    // FE + FM for one frame. FM waits until the back end has fixed the map
    // state for this frame (i.e. finished any map update of frame k-1).
    FrontEndResult front_end(int frame_index, RgbdFrame frame) {
        FrontEndResult r;
        r.frame_index = frame_index;
        r.timestamp = frame.timestamp;
        r.depth = std::move(frame.depth);
        r.depth_width = frame.depth_width;
        r.depth_height = frame.depth_height;

        record(frame_index, Stage::FE, true);
        auto t0 = Clock::now();
        const ImagePyramid pyramid = build_pyramid(frame.gray, config_.n_layers, config_.scale_factor);
        r.features = extract(pyramid, config_.extractor, pattern_);
        r.fe_ms = ms_between(t0, Clock::now());
        record(frame_index, Stage::FE, false);

        MapSnapshot snapshot;
        {
            std::unique_lock lock(map_mutex_);
            map_cv_.wait(lock, [&] { return map_ready_frame_ >= frame_index - 1 || abort_.load(); });
            if (abort_.load()) return r;
            snapshot = output_.map.snapshot();
        }

        record(frame_index, Stage::FM, true);
        t0 = Clock::now();
        std::vector<Descriptor256> frame_desc;
        frame_desc.reserve(r.features.size());
        for (const auto& f : r.features) frame_desc.push_back(f.descriptor);
        r.matches = match(frame_desc, snapshot.descriptors, config_.match_threshold);
        r.corrs.reserve(r.matches.size());
        for (const auto& m : r.matches) {
            const auto& f = r.features[m.feature_index];
            r.corrs.push_back({snapshot.positions[m.map_index], {f.x, f.y}});
        }
        r.fm_ms = ms_between(t0, Clock::now());
        record(frame_index, Stage::FM, false);
        return r;
    }

    void back_end(FrontEndResult r) {
        const int k = r.frame_index;
        FrameResult result;
        result.frame_index = k;
        result.timestamp = r.timestamp;
        result.matches = static_cast<int>(r.matches.size());
        result.timings.fe_ms = r.fe_ms;
        result.timings.fm_ms = r.fm_ms;

        if (k == 0) {
            // Bootstrap: the first frame is a keyframe at the identity pose.
            result.pose = PoseSE3::identity();
            result.tracked = true;
            result.is_keyframe = true;
        } else {
            record(k, Stage::PE, true);
            auto t0 = Clock::now();
            PnpResult pnp;
            std::vector<Correspondence> rel_corrs;
            if (r.corrs.size() >= 4) {
                // Estimate relative to the previous camera frame so the
                // identity-initialized RANSAC solver starts near the answer.
                rel_corrs = r.corrs;
                for (auto& c : rel_corrs) c.world_point = previous_pose_ * c.world_point;
                pnp = pnp_ransac(rel_corrs, config_.intrinsics, mix_seed(config_.seed, k),
                                 config_.ransac_iterations, config_.ransac_inlier_px);
            } else {
                pnp.status = PnpStatus::InsufficientData;
            }
            result.timings.pe_ms = ms_between(t0, Clock::now());
            record(k, Stage::PE, false);

            if (pnp.status == PnpStatus::Ok) {
                record(k, Stage::PO, true);
                t0 = Clock::now();
                std::vector<Correspondence> inlier_corrs;
                inlier_corrs.reserve(pnp.inliers.size());
                for (int idx : pnp.inliers) inlier_corrs.push_back(rel_corrs[idx]);
                const OptimizeResult opt = optimize_pose(pnp.pose, config_.intrinsics, inlier_corrs);
                result.timings.po_ms = ms_between(t0, Clock::now());
                record(k, Stage::PO, false);

                result.pose = opt.pose * previous_pose_;
                result.tracked = true;
                result.inliers = static_cast<int>(pnp.inliers.size());
                result.is_keyframe = is_keyframe(result.pose, last_keyframe_pose_, config_.keyframe);
            } else {
                // Tracking loss: keep the previous pose and carry on.
                result.pose = previous_pose_;
                result.tracked = false;
                result.is_keyframe = false;
            }
        }

        if (result.is_keyframe) {
            record(k, Stage::MU, true);
            const auto t0 = Clock::now();
            {
                std::lock_guard lock(map_mutex_);
                output_.map.touch_matches(r.matches, k);
                output_.map.insert_keyframe(r.features, r.depth, r.depth_width, r.depth_height,
                                            result.pose, config_.intrinsics, k, config_.max_depth);
                output_.map.prune(k, config_.keyframe);
                map_ready_frame_ = k;
            }
            map_cv_.notify_all();
            result.timings.mu_ms = ms_between(t0, Clock::now());
            record(k, Stage::MU, false);
            last_keyframe_pose_ = result.pose;
        } else {
            {
                std::lock_guard lock(map_mutex_);
                output_.map.touch_matches(r.matches, k);
                map_ready_frame_ = k;
            }
            map_cv_.notify_all();
        }

        previous_pose_ = result.pose;
        output_.trajectory.append(r.timestamp, result.pose.inverse()); // file convention
        output_.results.push_back(std::move(result));
    }

    void run_pipelined(const FrameSource& source) {
        std::thread front([&] {
            try {
                int frame_index = 0;
                for (std::optional<RgbdFrame> frame = source(); frame && !abort_.load();
                     frame = source()) {
                    FrontEndResult r = front_end(frame_index++, std::move(*frame));
                    std::unique_lock lock(slot_mutex_);
                    slot_cv_.wait(lock, [&] { return !slot_.has_value() || abort_.load(); });
                    if (abort_.load()) break;
                    slot_ = std::move(r);
                    slot_cv_.notify_all();
                }
            } catch (...) {
                std::lock_guard lock(slot_mutex_);
                front_error_ = std::current_exception();
            }
            {
                std::lock_guard lock(slot_mutex_);
                front_done_ = true;
            }
            slot_cv_.notify_all();
        });

        try {
            for (;;) {
                std::optional<FrontEndResult> r;
                {
                    std::unique_lock lock(slot_mutex_);
                    slot_cv_.wait(lock, [&] { return slot_.has_value() || front_done_; });
                    if (!slot_.has_value()) break;
                    r = std::move(slot_);
                    slot_.reset();
                }
                slot_cv_.notify_all();
                back_end(std::move(*r));
            }
        } catch (...) {
            // Unblock and collect the front end before propagating. The empty
            // critical sections order the store against in-flight predicate
            // checks so the notify cannot be lost.
            abort_.store(true);
            { std::lock_guard lock(map_mutex_); }
            map_cv_.notify_all();
            { std::lock_guard lock(slot_mutex_); }
            slot_cv_.notify_all();
            front.join();
            throw;
        }
        front.join();
        if (front_error_) std::rethrow_exception(front_error_);
    }

    SlamConfig config_;
    RunOptions options_;
    RsBriefPattern pattern_;
    Clock::time_point origin_;

    RunOutput output_;
    PoseSE3 previous_pose_;
    PoseSE3 last_keyframe_pose_;

    std::mutex map_mutex_;
    std::condition_variable map_cv_;
    int map_ready_frame_ = -1;

    std::mutex slot_mutex_;
    std::condition_variable slot_cv_;
    std::optional<FrontEndResult> slot_;
    bool front_done_ = false;
    std::exception_ptr front_error_;
    std::atomic<bool> abort_ = false;

    std::mutex trace_mutex_;
};

} // namespace

RunOutput run_sequence(const FrameSource& source, const SlamConfig& config,
                       const RunOptions& options) {
    PipelineRunner runner(config, options);
    return runner.run(source);
}

RunStats collect_stats(const std::vector<FrameResult>& results) {
    if (results.empty()) throw std::invalid_argument("collect_stats: no frame results");

    RunStats stats;
    stats.frames = static_cast<int>(results.size());
    double fe = 0, fm = 0, pe = 0, po = 0, mu = 0, total = 0;
    int pe_n = 0, po_n = 0;
    for (const auto& r : results) {
        fe += r.timings.fe_ms;
        fm += r.timings.fm_ms;
        pe += r.timings.pe_ms;
        po += r.timings.po_ms;
        pe_n += r.timings.pe_ms > 0.0;
        po_n += r.timings.po_ms > 0.0;
        total += r.timings.fe_ms + r.timings.fm_ms + r.timings.pe_ms + r.timings.po_ms +
                 r.timings.mu_ms;
        if (r.is_keyframe) {
            ++stats.keyframes;
            mu += r.timings.mu_ms;
        }
        stats.tracked += r.tracked;
    }
    stats.mean_fe_ms = fe / stats.frames;
    stats.mean_fm_ms = fm / stats.frames;
    stats.mean_pe_ms = pe_n ? pe / pe_n : 0.0;
    stats.mean_po_ms = po_n ? po / po_n : 0.0;
    stats.mean_mu_ms = stats.keyframes ? mu / stats.keyframes : 0.0;

    // Two-stage overlap model: the front end of the next frame runs against
    // the back end of the current one; after a keyframe the matcher stalls
    // until map updating completes.
    stats.normal_frame_ms = std::max(stats.mean_fe_ms + stats.mean_fm_ms,
                                     stats.mean_pe_ms + stats.mean_po_ms);
    stats.key_frame_ms =
        std::max(stats.mean_fe_ms, stats.mean_pe_ms + stats.mean_po_ms + stats.mean_mu_ms) +
        stats.mean_fm_ms;
    stats.normal_frame_fps = stats.normal_frame_ms > 0.0 ? 1000.0 / stats.normal_frame_ms : 0.0;
    stats.key_frame_fps = stats.key_frame_ms > 0.0 ? 1000.0 / stats.key_frame_ms : 0.0;
    stats.keyframe_fraction = static_cast<double>(stats.keyframes) / stats.frames;
    stats.wall_clock_fps = total > 0.0 ? 1000.0 * stats.frames / total : 0.0;
    return stats;
}

void write_timings_csv(const std::vector<FrameResult>& results, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw std::runtime_error("write_timings_csv: cannot open " + path);
    std::fputs("frame,timestamp,FE_ms,FM_ms,PE_ms,PO_ms,MU_ms,keyframe,tracked\n", out);
    for (const auto& r : results)
        std::fprintf(out, "%d,%.6f,%.3f,%.3f,%.3f,%.3f,%.3f,%d,%d\n", r.frame_index, r.timestamp,
                     r.timings.fe_ms, r.timings.fm_ms, r.timings.pe_ms, r.timings.po_ms,
                     r.timings.mu_ms, r.is_keyframe ? 1 : 0, r.tracked ? 1 : 0);
    std::fclose(out);
}

std::string format_stats(const RunStats& stats) {
    std::ostringstream out;
    char buf[160];
    const auto line = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out << buf << '\n';
    };
    line("frames: %d  (keyframes %d = %.1f%%, tracked %d)", stats.frames, stats.keyframes,
         100.0 * stats.keyframe_fraction, stats.tracked);
    out << "stage breakdown, mean ms:\n";
    line("  feature extraction (FE)  %8.3f", stats.mean_fe_ms);
    line("  feature matching   (FM)  %8.3f", stats.mean_fm_ms);
    line("  pose estimation    (PE)  %8.3f", stats.mean_pe_ms);
    line("  pose optimization  (PO)  %8.3f", stats.mean_po_ms);
    line("  map updating       (MU)  %8.3f  (keyframes only)", stats.mean_mu_ms);
    out << "pipelined frame time model:\n";
    line("  normal frame: max(FE+FM, PE+PO)      = %8.3f ms  (%.2f fps)", stats.normal_frame_ms,
         stats.normal_frame_fps);
    line("  key frame:    max(FE, PE+PO+MU) + FM = %8.3f ms  (%.2f fps)", stats.key_frame_ms,
         stats.key_frame_fps);
    line("sequential wall clock: %.2f fps", stats.wall_clock_fps);
    return out.str();
}

} // namespace rsslam
