#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capsynth/camera.hpp"
#include "capsynth/render.hpp"
#include "capsynth/viewplan.hpp"

namespace capsynth {

/// Structured scene description shared by the planner and the simulated
/// sensor: camera, static render primitives, the hand model (collision
/// vertices, fingertip plane, render primitives in the hand frame) and the
/// posed arm link hulls.
struct SceneFile {
    sensor::CameraModel camera;
    geom::Vec3 light{0.25, 0.35, 0.9};
    std::vector<sensor::ScenePrimitive> primitives;      // world frame
    std::vector<geom::Vec3> hand_vertices;               // hand frame
    double finger_top_height = 0.02;
    std::vector<sensor::ScenePrimitive> hand_render;     // hand frame
    std::vector<geom::ConvexShape> arm_links;            // world frame

    view::SceneGeometry view_geometry() const;
};

SceneFile load_scene(const std::string& path);
void save_scene(const std::string& path, const SceneFile& scene);

}  // namespace capsynth
