// Benchmark comparing the serial reference kernels against the OpenMP
// paths: frame rendering, observation planning, and batch synthesis.

#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "capsynth/render.hpp"
#include "capsynth/synthesis.hpp"
#include "capsynth/viewplan.hpp"

using namespace capsynth;
using geom::Vec3;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count();
}

sensor::CameraModel top_down_camera(int size) {
    sensor::CameraModel cam;
    cam.fx = cam.fy = 1.4 * size;
    cam.cx = cam.cy = size / 2.0;
    cam.width = cam.height = size;
    cam.extrinsics.rotation.m = {1, 0, 0, 0, -1, 0, 0, 0, -1};
    cam.extrinsics.translation = {0, 0, 1.5};
    return cam;
}

std::vector<sensor::ScenePrimitive> bench_scene() {
    std::vector<sensor::ScenePrimitive> prims;
    sensor::ScenePrimitive table;
    table.kind = sensor::PrimitiveKind::Box;
    table.box_size = {1.2, 0.9, 0.02};
    table.pose.translation = {0, 0, -0.01};
    table.instance_id = 1;
    table.albedo = 0.25;
    prims.push_back(table);

    sensor::ScenePrimitive rack;
    rack.kind = sensor::PrimitiveKind::Box;
    rack.box_size = {0.3, 0.2, 0.06};
    rack.pose.translation = {0, 0, 0.03};
    rack.instance_id = 2;
    rack.albedo = 0.45;
    prims.push_back(rack);

    for (int i = 0; i < 24; ++i) {
        sensor::ScenePrimitive tube;
        tube.kind = sensor::PrimitiveKind::Cylinder;
        tube.radius = 0.011;
        tube.height = 0.02;
        tube.pose.translation = {-0.12 + 0.04 * (i % 7), -0.07 + 0.045 * (i / 7), 0.07};
        tube.instance_id = 100 + i;
        tube.albedo = 0.6 + 0.015 * (i % 5);
        prims.push_back(tube);
    }
    return prims;
}

seg::Cutout disk_cutout(int radius, float value) {
    int d = 2 * radius + 1;
    seg::Cutout c;
    c.patch = ImageF(d, d, value);
    c.alpha = ImageU8(d, d, 0);
    for (int y = 0; y < d; ++y)
        for (int x = 0; x < d; ++x)
            if ((x - radius) * (x - radius) + (y - radius) * (y - radius) <= radius * radius)
                c.alpha.at(x, y) = 1;
    c.anchor = {0, 0, d - 1, d - 1};
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel benchmark"};
    int size = 1024;
    int frames = 4;
    int images = 16;
    app.add_option("--size", size, "render resolution (NxN)");
    app.add_option("--frames", frames, "render repetitions");
    app.add_option("--images", images, "synthetic images per batch");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads available: %d\n\n", max_threads());
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");

    auto cam = top_down_camera(size);
    auto scene = bench_scene();
    {
        sensor::RenderOptions opts;
        opts.exec = Exec::Serial;
        auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < frames; ++i) sensor::render_frame(scene, cam, opts);
        double serial = ms_since(t0) / frames;

        opts.exec = Exec::Parallel;
        t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < frames; ++i) sensor::render_frame(scene, cam, opts);
        double parallel = ms_since(t0) / frames;
        std::printf("%-28s %12.2f %12.2f %8.2fx\n", "render_frame", serial, parallel,
                    serial / parallel);
    }

    {
        view::ViewPlanConfig vp;
        vp.max_tilt_deg = 60.0;
        vp.grasp_step_deg = 60.0;
        vp.icosphere_level = 4;
        vp.workspace = {{-0.2, -0.1, 0.3}, {0.2, 0.1, 0.3}};
        vp.grid_step = 0.1;

        view::SceneGeometry geo;
        geo.camera_origin = cam.position();
        geo.hand_model.vertices = {{-0.04, -0.02, -0.1}, {0.04, -0.02, -0.1}, {-0.04, 0.02, -0.1},
                                   {0.04, 0.02, -0.1},   {-0.04, -0.02, 0.02}, {0.04, -0.02, 0.02},
                                   {-0.04, 0.02, 0.02},  {0.04, 0.02, 0.02}};
        for (int i = 0; i < 3; ++i) {
            geom::ConvexShape link;
            link.vertices = {{0.3, -0.05, 0.0}, {0.4, -0.05, 0.0}, {0.3, 0.05, 0.0},
                             {0.4, 0.05, 0.0},  {0.3, -0.05, 0.8}, {0.4, -0.05, 0.8},
                             {0.3, 0.05, 0.8},  {0.4, 0.05, 0.8}};
            link.pose.translation = {0.05 * i, 0.1 * i, 0};
            geo.arm_links.push_back(link);
        }

        auto t0 = std::chrono::steady_clock::now();
        auto serial_poses = view::plan_observations(vp, geo, Exec::Serial);
        double serial = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        auto parallel_poses = view::plan_observations(vp, geo, Exec::Parallel);
        double parallel = ms_since(t0);
        std::printf("%-28s %12.2f %12.2f %8.2fx  (%zu poses)\n", "plan_observations", serial,
                    parallel, serial / parallel, parallel_poses.size());
    }

    {
        synth::RackBackground bg;
        bg.frame = ImageF(size, size, 0.3f);
        bg.polygon.vertices = {{size / 8, size / 8},
                               {7 * size / 8, size / 8},
                               {7 * size / 8, 7 * size / 8},
                               {size / 8, 7 * size / 8}};

        std::vector<seg::Cutout> pool = {disk_cutout(size / 40, 0.8f), disk_cutout(size / 48, 0.6f),
                                         disk_cutout(size / 36, 0.9f)};
        for (size_t i = 0; i < pool.size(); ++i) pool[i].class_id = static_cast<int>(i);

        synth::SynthConfig cfg;
        cfg.max_instances = 30;
        cfg.canvas_width = cfg.canvas_height = size;
        cfg.background_swap_prob = 0.5;
        synth::AugmentConfig aug;
        std::vector<ImageF> bgs = {ImageF(size / 2, size / 2, 0.1f)};

        auto t0 = std::chrono::steady_clock::now();
        synth::synthesize_batch({bg}, pool, cfg, aug, bgs, 7, images, Exec::Serial);
        double serial = ms_since(t0) / images;
        t0 = std::chrono::steady_clock::now();
        synth::synthesize_batch({bg}, pool, cfg, aug, bgs, 7, images, Exec::Parallel);
        double parallel = ms_since(t0) / images;
        std::printf("%-28s %12.2f %12.2f %8.2fx  (per image)\n", "synthesize_batch", serial,
                    parallel, serial / parallel);
    }
    return 0;
}
