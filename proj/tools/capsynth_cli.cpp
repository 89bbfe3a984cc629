#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capsynth/pipeline.hpp"

namespace fs = std::filesystem;
using namespace capsynth;

namespace {

std::string timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    localtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
    return buf;
}

/// Stage outputs are immutable: an existing directory is left alone and a
/// timestamped sibling is used instead, unless --overwrite is given.
std::string resolve_stage_dir(const std::string& root, const std::string& name, bool overwrite) {
    std::string dir = root + "/" + name;
    if (fs::exists(dir) && !overwrite) dir = root + "/" + name + "-" + timestamp();
    return dir;
}

void mark_failed(const std::string& dir, const std::string& message) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream os(dir + "/FAILED");
    os << message << "\n";
}

struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Observation planning, simulated capture, cap segmentation, copy-paste dataset "
                 "synthesis, and detector evaluation"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::vector<std::string> overrides;
    bool overwrite = false;
    bool serial = false;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    int count_override = -1;

    app.add_option("--config", config_path, "pipeline config JSON")->required();
    app.add_option("--out", out_override, "output root (default: config, then $CAPSYNTH_OUT)");
    app.add_option("--seed", seed_override, "master seed override")->each([&](const std::string&) {
        has_seed = true;
    });
    app.add_option("--count", count_override,
                   "stage count override (synth images / capture poses)");
    app.add_option("--set", overrides, "override a config key, e.g. --set synth.max_instances=20")
        ->take_all();
    app.add_flag("--overwrite", overwrite, "write into existing stage directories");
    app.add_flag("--serial", serial, "disable OpenMP parallel kernels");

    auto* cmd_plan = app.add_subcommand("plan-views", "generate observation poses");
    auto* cmd_capture = app.add_subcommand("capture", "render frames at the planned poses");
    auto* cmd_segment = app.add_subcommand("segment", "fit masks, cut caps, segment racks");
    auto* cmd_synth = app.add_subcommand("synth", "synthesize the copy-paste dataset");
    auto* cmd_split = app.add_subcommand("split", "assign train/val split in the manifest");
    auto* cmd_eval = app.add_subcommand("eval", "score detections against dataset labels");
    auto* cmd_all = app.add_subcommand("all", "run every stage in order");

    std::string plan_dir_opt, capture_dir_opt, segment_dir_opt, dataset_dir_opt, detections_opt;
    cmd_capture->add_option("--plan", plan_dir_opt, "plan stage directory");
    cmd_segment->add_option("--capture", capture_dir_opt, "capture stage directory");
    cmd_synth->add_option("--segment", segment_dir_opt, "segment stage directory");
    cmd_split->add_option("--dataset", dataset_dir_opt, "dataset directory");
    cmd_eval->add_option("--dataset", dataset_dir_opt, "dataset directory");
    cmd_eval->add_option("--detections", detections_opt, "detections file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    pipeline::PipelineConfig config;
    try {
        config = pipeline::load_config_file(config_path, overrides);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (has_seed) config.seed = seed_override;
    if (count_override >= 0) {
        if (*cmd_synth || *cmd_all) config.synth_count = count_override;
        if (*cmd_capture) config.capture_pose_limit = count_override;
    }

    std::string root = config.out_root;
    if (!out_override.empty()) {
        root = out_override;
    } else if (root == "out") {
        if (const char* env = std::getenv("CAPSYNTH_OUT"); env && *env) root = env;
    }
    const Exec exec = serial ? Exec::Serial : Exec::Parallel;

    SceneFile scene;
    const bool needs_scene = *cmd_plan || *cmd_capture || *cmd_segment || *cmd_all;
    if (needs_scene) {
        try {
            scene = load_scene(config.scene_path);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }

    std::string current_dir;
    try {
        fs::create_directories(root);

        std::string plan_dir = plan_dir_opt.empty() ? root + "/plan" : plan_dir_opt;
        std::string capture_dir = capture_dir_opt.empty() ? root + "/capture" : capture_dir_opt;
        std::string segment_dir = segment_dir_opt.empty() ? root + "/segment" : segment_dir_opt;
        std::string dataset_dir = dataset_dir_opt.empty() ? root + "/dataset" : dataset_dir_opt;

        if (*cmd_plan || *cmd_all) {
            current_dir = plan_dir = resolve_stage_dir(root, "plan", overwrite || *cmd_all);
            pipeline::stage_plan_views(config, scene, plan_dir, exec);
            std::cout << "plan-views: wrote " << plan_dir << "/poses.txt\n";
        }
        if (*cmd_capture || *cmd_all) {
            current_dir = capture_dir = resolve_stage_dir(root, "capture", overwrite || *cmd_all);
            auto s = pipeline::stage_capture(config, scene, plan_dir, capture_dir, exec);
            std::cout << "capture: " << s.tube_frames << " tube frames, " << s.rack_frames
                      << " rack frames -> " << capture_dir << "\n";
        }
        if (*cmd_segment || *cmd_all) {
            current_dir = segment_dir = resolve_stage_dir(root, "segment", overwrite || *cmd_all);
            auto s = pipeline::stage_segment(config, scene, capture_dir, segment_dir);
            std::cout << "segment: " << s.cutouts << " cutouts, " << s.racks << " racks ("
                      << s.skipped_frames << " frames skipped) -> " << segment_dir << "\n";
        }
        if (*cmd_synth || *cmd_all) {
            current_dir = dataset_dir = resolve_stage_dir(root, "dataset", overwrite || *cmd_all);
            auto s = pipeline::stage_synth(config, segment_dir, dataset_dir, exec);
            std::cout << "synth: " << s.images << " images, " << s.instances << " instances, "
                      << s.background_swaps << " background swaps -> " << dataset_dir << "\n";
        }
        if (*cmd_split || *cmd_all) {
            current_dir = dataset_dir;
            pipeline::stage_split(config, dataset_dir);
            std::cout << "split: updated " << dataset_dir << "/manifest.txt\n";
        }
        if (*cmd_eval) {
            std::string detections = detections_opt.empty() ? config.detections_path : detections_opt;
            if (detections.empty()) {
                std::cerr << "config error: no detections file given (flag --detections or "
                             "eval.detections)\n";
                return 2;
            }
            current_dir = resolve_stage_dir(root, "eval", overwrite);
            auto report = pipeline::stage_eval(config, dataset_dir, detections, current_dir);
            std::printf("eval: mAP %.6f over %zu classes -> %s/report.txt\n", report.map,
                        report.per_class.size(), current_dir.c_str());
        }
    } catch (const std::exception& e) {
        std::cerr << "stage failed: " << e.what() << "\n";
        mark_failed(current_dir, e.what());
        return 1;
    }
    return 0;
}
