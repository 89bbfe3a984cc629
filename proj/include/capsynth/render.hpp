#pragma once

#include <array>
#include <vector>

#include "capsynth/camera.hpp"
#include "capsynth/geom.hpp"
#include "capsynth/parallel.hpp"
#include "capsynth/point_frame.hpp"
#include "capsynth/rng.hpp"

namespace capsynth::sensor {

enum class PrimitiveKind { Cylinder, Box, Mesh };

/// Renderable solid. Cylinder axis is local +Z, centered at the origin;
/// box is axis-aligned in its local frame, centered at the origin.
/// `point_return = false` emulates translucent objects under structured
/// light: they shade the gray image but yield no depth point.
struct ScenePrimitive {
    PrimitiveKind kind = PrimitiveKind::Box;
    double radius = 0.0;                         // cylinder
    double height = 0.0;                         // cylinder
    geom::Vec3 box_size;                         // box full extents
    std::vector<geom::Vec3> mesh_vertices;       // mesh
    std::vector<std::array<int, 3>> mesh_faces;  // mesh
    geom::RigidTransform pose;
    int instance_id = 0;
    double albedo = 0.8;
    bool point_return = true;

    void validate() const;
};

struct RenderOptions {
    geom::Vec3 light_dir{0.25, 0.35, 0.9};  // toward the light, normalized on use
    Exec exec = Exec::Parallel;
};

/// One ray per pixel center, nearest hit wins. Gray is albedo times the
/// Lambertian term of a single directional light; misses stay invalid.
/// Output is identical for serial and parallel execution.
PointFrame render_frame(const std::vector<ScenePrimitive>& scene, const CameraModel& camera,
                        const RenderOptions& opts = {});

/// Invalidate each valid pixel independently with probability p.
/// The gray channel is untouched.
PointFrame apply_dropout(const PointFrame& frame, double p, Rng& rng);

}  // namespace capsynth::sensor
