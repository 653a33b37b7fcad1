#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rsslam/config.hpp"
#include "rsslam/se3.hpp"
#include "rsslam/trajectory.hpp"
#include "rsslam/tum_dataset.hpp"
#include "rsslam/world_map.hpp"

namespace rsslam {

/// Pipeline stages, named after the tracking loop: feature extraction,
/// feature matching, pose estimation, pose optimization, map updating.
enum class Stage { FE, FM, PE, PO, MU };

const char* stage_name(Stage stage);

/// Per-stage wall-clock durations for one frame, milliseconds.
struct StageTimings {
    double fe_ms = 0.0;
    double fm_ms = 0.0;
    double pe_ms = 0.0;
    double po_ms = 0.0;
    double mu_ms = 0.0;
};

struct FrameResult {
    int frame_index = 0;
    double timestamp = 0.0;
    PoseSE3 pose; // world -> camera; propagated from the previous frame when untracked
    bool is_keyframe = false;
    bool tracked = false;
    int matches = 0;
    int inliers = 0;
    StageTimings timings;
};

/// Stage begin/end event recorded on a monotonic clock, for checking the
/// pipeline ordering rules.
struct PipelineEvent {
    int frame_index = 0;
    Stage stage = Stage::FE;
    bool is_begin = true;
    double time_s = 0.0;
};

/// Pull-based frame stream; returns nullopt at end of sequence.
using FrameSource = std::function<std::optional<RgbdFrame>()>;

FrameSource make_frame_source(std::vector<RgbdFrame> frames);
FrameSource make_frame_source(std::vector<SequenceEntry> entries, double depth_scale);

struct RunOptions {
    bool sequential = false;             // disable the two-stage overlap
    std::vector<PipelineEvent>* trace = nullptr;
};

struct RunOutput {
    Trajectory trajectory;
    std::vector<FrameResult> results;
    GlobalMap map;
};

/// Frame-by-frame tracking over the stream. The front end (FE + FM) of frame
/// k+1 overlaps the back end (PE + PO + MU) of frame k; after a keyframe, FM
/// of the next frame does not begin until map updating has finished. The
/// first frame is a keyframe at the identity pose and seeds the map from its
/// depth. Tracking failures propagate the previous pose and are flagged.
/// For a fixed config the pipelined and sequential modes produce identical
/// trajectories.
RunOutput run_sequence(const FrameSource& source, const SlamConfig& config,
                       const RunOptions& options = {});

/// Aggregate timing report in the shape of the runtime tables: per-stage
/// means, modeled pipelined frame times, frame rates and keyframe share.
struct RunStats {
    int frames = 0;
    int keyframes = 0;
    int tracked = 0;
    double mean_fe_ms = 0.0;
    double mean_fm_ms = 0.0;
    double mean_pe_ms = 0.0;
    double mean_po_ms = 0.0;
    double mean_mu_ms = 0.0; // over keyframes
    /// Modeled two-stage pipeline period for normal frames:
    /// max(FE + FM, PE + PO).
    double normal_frame_ms = 0.0;
    /// Modeled period around a keyframe: max(FE, PE + PO + MU) + FM.
    double key_frame_ms = 0.0;
    double normal_frame_fps = 0.0;
    double key_frame_fps = 0.0;
    double keyframe_fraction = 0.0;
    double wall_clock_fps = 0.0; // from summed stage times, sequential
};

RunStats collect_stats(const std::vector<FrameResult>& results);

/// Stage-timing CSV, one row per frame:
/// "frame,timestamp,FE_ms,FM_ms,PE_ms,PO_ms,MU_ms,keyframe,tracked".
void write_timings_csv(const std::vector<FrameResult>& results, const std::string& path);

/// Human-readable version of collect_stats (the bench / summary report).
std::string format_stats(const RunStats& stats);

} // namespace rsslam
