#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capsynth/camera.hpp"
#include "capsynth/collide.hpp"
#include "capsynth/geom.hpp"
#include "capsynth/parallel.hpp"

namespace capsynth::view {

/// Planner configuration. Rotation candidates come from icosphere vertices
/// within `max_tilt_deg` of the up axis; grasp candidates are spaced
/// `grasp_step_deg` apart around the held tube's symmetry axis.
struct ViewPlanConfig {
    double max_tilt_deg = 30.0;
    double grasp_step_deg = 360.0;
    int icosphere_level = 4;
    geom::Box3 workspace{{0, 0, 0}, {0, 0, 0}};
    double grid_step = 0.1;  // meters
    geom::Vec3 up_axis{0, 0, 1};
    std::optional<sensor::CameraModel> frustum;  // when set, grid points must project in-image

    void validate() const;
};

struct ObservationPose {
    geom::Vec3 position;
    geom::Vec3 tube_axis;     // unit
    double grasp_angle_deg = 0.0;
    bool feasible = true;
};

struct SceneGeometry {
    geom::Vec3 camera_origin;
    geom::ConvexShape hand_model;               // vertices in the hand's local frame
    std::vector<geom::ConvexShape> arm_links;   // posed in world
};

/// Regular grid over the workspace box, x-major order, optionally culled to
/// the camera frustum. A box smaller than one cell yields its min corner.
std::vector<geom::Vec3> sample_positions(const ViewPlanConfig& config);

/// Icosphere vertices strictly within max_tilt_deg of the up axis,
/// in icosphere vertex order.
std::vector<geom::Vec3> sample_rotations(const ViewPlanConfig& config);

/// Angles {0, w, 2w, ...} below 360.
std::vector<double> enumerate_grasps(double grasp_step_deg);

/// Convex hull of the camera origin and the posed hand vertices.
geom::ConvexShape visual_polyhedron(const SceneGeometry& scene,
                                    const geom::RigidTransform& hand_pose);

/// World pose of the hand holding a tube at `position` with symmetry axis
/// `tube_axis`, rotated `grasp_angle_deg` about that axis.
geom::RigidTransform hand_pose_for(const geom::Vec3& position, const geom::Vec3& tube_axis,
                                   double grasp_angle_deg);

/// Cartesian product of positions and filtered rotations. Each pose takes
/// the first grasp angle whose visual polyhedron avoids every arm link;
/// poses with no such grasp are kept with feasible = false. Deterministic
/// order regardless of execution policy.
std::vector<ObservationPose> plan_observations(const ViewPlanConfig& config,
                                               const SceneGeometry& scene,
                                               Exec exec = Exec::Parallel);

/// Line-oriented pose records: position, axis, grasp angle, feasibility.
void write_pose_list(const std::string& path, const std::vector<ObservationPose>& poses);
std::vector<ObservationPose> read_pose_list(const std::string& path);

}  // namespace capsynth::view
