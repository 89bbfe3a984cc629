#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "capsynth/evaluation.hpp"
#include "capsynth/parallel.hpp"
#include "capsynth/scene.hpp"
#include "capsynth/synthesis.hpp"
#include "capsynth/viewplan.hpp"

namespace capsynth::pipeline {

/// Instance ids the capture stage assigns inside rendered frames.
constexpr int kTableId = 1;
constexpr int kRackId = 2;
constexpr int kHandIdBase = 10;
constexpr int kBodyIdBase = 50;   // tube bodies (no point returns)
constexpr int kCapIdBase = 100;   // kCapIdBase + class_id

/// Held-tube geometry per class. The tube hangs along the hand's +Z axis,
/// gripped at the hand origin; the cap sits on the body top, which is
/// `grip_offset` above the grip point and must clear the fingertip plane.
struct TubeSpec {
    std::string name = "tube";
    int class_id = 0;
    double cap_radius = 0.011;
    double cap_length = 0.022;
    double body_radius = 0.008;
    double body_length = 0.10;
    double grip_offset = 0.035;
    double cap_albedo = 0.85;
    double body_albedo = 0.40;
    double rack_height = 0.08;  // cap top above the table when racked
};

struct PipelineConfig {
    std::uint64_t seed = 1;
    std::string out_root = "out";
    std::string scene_path = "scene.json";

    view::ViewPlanConfig viewplan;
    bool clip_positions_to_frustum = true;

    int capture_pose_limit = 0;  // 0 = all feasible poses
    double dropout_prob = 0.0;
    std::vector<TubeSpec> tubes;
    int rack_frame_count = 3;
    geom::Vec3 rack_size{0.30, 0.20, 0.06};
    double rack_albedo = 0.45;
    double rack_jitter = 0.08;  // rack pushes: +-x/y and free yaw

    double trim_fraction = 0.01;
    geom::Vec3 mask_offset_min{0, 0, 0};
    geom::Vec3 mask_offset_max{0, 0, 0};
    int merge_frame_count = 8;
    double table_height = 0.0;
    double rack_band = 0.12;

    synth::SynthConfig synth;
    synth::AugmentConfig augment;
    int synth_count = 100;
    std::string background_dir;

    int split_train = 4;
    int split_val = 1;

    double iou_threshold = 0.5;
    std::string detections_path;

    void validate() const;
};

PipelineConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& config);

/// Load a config file and apply `key.path=value` overrides on the raw JSON
/// before parsing (flag > file > default).
PipelineConfig load_config_file(const std::string& path,
                                const std::vector<std::string>& overrides = {});

/// Digest over every generation parameter (out_root excluded).
std::string config_digest(const PipelineConfig& config);

/// Writes the exact effective config into the artifact directory.
void write_config_snapshot(const std::string& dir, const PipelineConfig& config);

/// plan/: poses.txt (all poses, infeasible ones flagged), config.json, run.log.
void stage_plan_views(const PipelineConfig& config, const SceneFile& scene,
                      const std::string& out_dir, Exec exec = Exec::Parallel);

/// capture/tubes and capture/racks: PointFrame files plus manifest.json
/// with per-frame hand poses and provenance.
struct CaptureSummary {
    int tube_frames = 0;
    int rack_frames = 0;
};
CaptureSummary stage_capture(const PipelineConfig& config, const SceneFile& scene,
                             const std::string& plan_dir, const std::string& out_dir,
                             Exec exec = Exec::Parallel);

/// segment/cutouts: per-frame cap cutouts; segment/racks: full-frame rack
/// backgrounds with paste polygons; segment/masks: fitted annotation masks.
struct SegmentSummary {
    int cutouts = 0;
    int racks = 0;
    int skipped_frames = 0;
};
SegmentSummary stage_segment(const PipelineConfig& config, const SceneFile& scene,
                             const std::string& capture_dir, const std::string& out_dir);

/// dataset/: images/, labels/, manifest.txt (unsplit: everything train).
struct SynthSummary {
    int images = 0;
    int instances = 0;
    int background_swaps = 0;
};
SynthSummary stage_synth(const PipelineConfig& config, const std::string& segment_dir,
                         const std::string& out_dir, Exec exec = Exec::Parallel);

/// Rewrites dataset/manifest.txt with the deterministic split.
void stage_split(const PipelineConfig& config, const std::string& dataset_dir);

/// eval/: report.txt and report.kv against the dataset's labels.
eval::EvalReport stage_eval(const PipelineConfig& config, const std::string& dataset_dir,
                            const std::string& detections_path, const std::string& out_dir);

/// Cutout pool / rack background loaders shared by the synth stage and the
/// verification suites.
std::vector<seg::Cutout> load_cutout_pool(const std::string& segment_dir);
std::vector<synth::RackBackground> load_rack_backgrounds(const std::string& segment_dir);
std::vector<ImageF> load_background_pool(const std::string& dir);

}  // namespace capsynth::pipeline
