#include "capsynth/viewplan.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "capsynth/icosphere.hpp"

namespace capsynth::view {

using geom::ConvexShape;
using geom::RigidTransform;
using geom::Vec3;

void ViewPlanConfig::validate() const {
    if (max_tilt_deg <= 0.0 || max_tilt_deg > 180.0)
        throw std::invalid_argument("max_tilt_deg must be in (0,180]");
    if (grasp_step_deg <= 0.0 || grasp_step_deg > 360.0)
        throw std::invalid_argument("grasp_step_deg must be in (0,360]");
    if (icosphere_level < 1) throw std::invalid_argument("icosphere_level must be >= 1");
    if (grid_step <= 0.0) throw std::invalid_argument("grid_step must be positive");
    if (workspace.min.x > workspace.max.x || workspace.min.y > workspace.max.y ||
        workspace.min.z > workspace.max.z)
        throw std::invalid_argument("workspace box is inverted");
}

std::vector<Vec3> sample_positions(const ViewPlanConfig& config) {
    config.validate();
    const Vec3 ext = config.workspace.extents();
    const double eps = 1e-9;
    auto steps = [&](double e) { return static_cast<int>(std::floor(e / config.grid_step + eps)) + 1; };
    int nx = steps(ext.x), ny = steps(ext.y), nz = steps(ext.z);

    std::vector<Vec3> out;
    out.reserve(static_cast<size_t>(nx) * ny * nz);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            for (int iz = 0; iz < nz; ++iz) {
                Vec3 p = config.workspace.min +
                         Vec3{ix * config.grid_step, iy * config.grid_step, iz * config.grid_step};
                if (config.frustum) {
                    double u, v, depth;
                    if (!config.frustum->project(p, u, v, depth) || !config.frustum->in_image(u, v))
                        continue;
                }
                out.push_back(p);
            }
    return out;
}

std::vector<Vec3> sample_rotations(const ViewPlanConfig& config) {
    config.validate();
    const geom::Icosphere ico = geom::build_icosphere(config.icosphere_level);
    const Vec3 up = geom::normalized(config.up_axis);
    const double limit = geom::deg_to_rad(config.max_tilt_deg);

    std::vector<Vec3> out;
    for (const auto& v : ico.vertices)
        if (geom::angle_between(v, up) < limit) out.push_back(v);
    return out;
}

std::vector<double> enumerate_grasps(double grasp_step_deg) {
    if (grasp_step_deg <= 0.0) throw std::invalid_argument("grasp step must be positive");
    std::vector<double> angles;
    for (int k = 0; k * grasp_step_deg < 360.0 - 1e-9; ++k) angles.push_back(k * grasp_step_deg);
    if (angles.empty()) angles.push_back(0.0);
    return angles;
}

ConvexShape visual_polyhedron(const SceneGeometry& scene, const RigidTransform& hand_pose) {
    ConvexShape shape;
    shape.vertices.reserve(scene.hand_model.vertices.size() + 1);
    shape.vertices.push_back(scene.camera_origin);
    for (const auto& v : scene.hand_model.vertices) shape.vertices.push_back(hand_pose.apply(v));
    return shape;
}

RigidTransform hand_pose_for(const Vec3& position, const Vec3& tube_axis, double grasp_angle_deg) {
    RigidTransform pose;
    pose.rotation = geom::align_z_to(tube_axis) * geom::rotation_z(geom::deg_to_rad(grasp_angle_deg));
    pose.translation = position;
    return pose;
}

std::vector<ObservationPose> plan_observations(const ViewPlanConfig& config,
                                               const SceneGeometry& scene, Exec exec) {
    const auto positions = sample_positions(config);
    const auto rotations = sample_rotations(config);
    const auto grasps = enumerate_grasps(config.grasp_step_deg);

    const size_t n = positions.size() * rotations.size();
    std::vector<ObservationPose> poses(n);

    parallel_for(static_cast<int>(n), exec, [&](int k) {
        size_t pi = static_cast<size_t>(k) / rotations.size();
        size_t ri = static_cast<size_t>(k) % rotations.size();
        ObservationPose pose;
        pose.position = positions[pi];
        pose.tube_axis = rotations[ri];
        pose.feasible = false;
        pose.grasp_angle_deg = 0.0;

        for (double angle : grasps) {
            ConvexShape vp =
                visual_polyhedron(scene, hand_pose_for(pose.position, pose.tube_axis, angle));
            bool blocked = false;
            for (const auto& link : scene.arm_links) {
                if (geom::convex_collide(vp, link)) {
                    blocked = true;
                    break;
                }
            }
            if (!blocked) {
                pose.feasible = true;
                pose.grasp_angle_deg = angle;
                break;
            }
        }
        poses[static_cast<size_t>(k)] = pose;
    });
    return poses;
}

void write_pose_list(const std::string& path, const std::vector<ObservationPose>& poses) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "# px py pz ax ay az grasp_deg feasible\n";
    char buf[256];
    for (const auto& p : poses) {
        std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %.9g %.9g %.9g %.9g %d\n", p.position.x,
                      p.position.y, p.position.z, p.tube_axis.x, p.tube_axis.y, p.tube_axis.z,
                      p.grasp_angle_deg, p.feasible ? 1 : 0);
        os << buf;
    }
}

std::vector<ObservationPose> read_pose_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::vector<ObservationPose> poses;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        ObservationPose p;
        int feasible = 0;
        if (!(ls >> p.position.x >> p.position.y >> p.position.z >> p.tube_axis.x >>
              p.tube_axis.y >> p.tube_axis.z >> p.grasp_angle_deg >> feasible))
            throw std::runtime_error(path + ": malformed pose record at line " +
                                     std::to_string(lineno));
        p.feasible = feasible != 0;
        poses.push_back(p);
    }
    return poses;
}

}  // namespace capsynth::view
