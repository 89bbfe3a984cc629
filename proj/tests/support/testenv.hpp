#pragma once

// Shared fixtures: a small simulated robot scene and a unique scratch
// directory per test.

#include <cstdlib>
#include <filesystem>
#include <string>

#include "capsynth/pipeline.hpp"
#include "capsynth/scene.hpp"

namespace testenv {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("capsynth_" + tag + "_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++)))
                    .string();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Top-down camera over a table, a two-finger hand with fingertips at
/// z = 0.02 in the hand frame, and one arm-link column off to the side.
inline capsynth::SceneFile make_test_scene(int res = 240) {
    using namespace capsynth;
    SceneFile s;
    s.camera.fx = s.camera.fy = 1.6 * res;
    s.camera.cx = s.camera.cy = res / 2.0;
    s.camera.width = s.camera.height = res;
    s.camera.extrinsics.rotation.m = {1, 0, 0, 0, -1, 0, 0, 0, -1};  // looks straight down
    s.camera.extrinsics.translation = {0, 0, 1.5};
    s.light = {0.25, 0.35, 0.9};

    sensor::ScenePrimitive table;
    table.kind = sensor::PrimitiveKind::Box;
    table.box_size = {1.2, 0.9, 0.02};
    table.pose.translation = {0, 0, -0.01};
    table.instance_id = pipeline::kTableId;
    table.albedo = 0.25;
    s.primitives.push_back(table);

    s.hand_vertices = {{-0.04, -0.02, -0.10}, {0.04, -0.02, -0.10}, {-0.04, 0.02, -0.10},
                       {0.04, 0.02, -0.10},   {-0.04, -0.02, 0.02}, {0.04, -0.02, 0.02},
                       {-0.04, 0.02, 0.02},   {0.04, 0.02, 0.02}};
    s.finger_top_height = 0.02;

    sensor::ScenePrimitive palm;
    palm.kind = sensor::PrimitiveKind::Box;
    palm.box_size = {0.07, 0.04, 0.05};
    palm.pose.translation = {0, 0, -0.055};
    palm.instance_id = pipeline::kHandIdBase;
    palm.albedo = 0.30;
    s.hand_render.push_back(palm);
    for (int i = 0; i < 2; ++i) {
        sensor::ScenePrimitive finger;
        finger.kind = sensor::PrimitiveKind::Box;
        finger.box_size = {0.008, 0.012, 0.05};
        finger.pose.translation = {i == 0 ? 0.016 : -0.016, 0, -0.005};
        finger.instance_id = pipeline::kHandIdBase + 1 + i;
        finger.albedo = 0.35;
        s.hand_render.push_back(finger);
    }

    geom::ConvexShape link;
    link.vertices = {{0.28, -0.06, 0.0}, {0.38, -0.06, 0.0}, {0.28, 0.06, 0.0}, {0.38, 0.06, 0.0},
                     {0.28, -0.06, 0.9}, {0.38, -0.06, 0.9}, {0.28, 0.06, 0.9}, {0.38, 0.06, 0.9}};
    s.arm_links.push_back(link);
    return s;
}

/// Config sized for tests: two tube classes, a small pose grid, small canvas.
inline capsynth::pipeline::PipelineConfig make_test_config(int res = 240) {
    using namespace capsynth;
    pipeline::PipelineConfig c;
    c.seed = 7;
    c.viewplan.max_tilt_deg = 40.0;
    c.viewplan.grasp_step_deg = 120.0;
    c.viewplan.icosphere_level = 2;
    c.viewplan.workspace = {{-0.10, -0.10, 0.30}, {0.10, 0.10, 0.30}};
    c.viewplan.grid_step = 0.1;

    c.capture_pose_limit = 4;
    c.rack_frame_count = 2;
    c.rack_size = {0.30, 0.20, 0.06};
    c.rack_jitter = 0.05;
    c.merge_frame_count = 4;

    pipeline::TubeSpec blue{"blue", 0, 0.0115, 0.018, 0.008, 0.070, 0.030, 0.90, 0.35, 0.050};
    pipeline::TubeSpec purple{"purple", 1, 0.0110, 0.022, 0.008, 0.100, 0.035, 0.70, 0.35, 0.080};
    c.tubes = {blue, purple};

    c.synth_count = 6;
    c.synth.max_instances = 8;
    c.synth.canvas_width = c.synth.canvas_height = res;
    c.synth.occlusion_limit_default = 0.15;
    c.synth.occlusion_limit_per_class[0] = 0.4;
    c.synth.background_swap_prob = 0.5;
    return c;
}

/// A few gradient PNGs usable as an environment background pool.
void write_background_pool(const std::string& dir, int count, int size);

}  // namespace testenv
