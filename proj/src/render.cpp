#include "capsynth/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capsynth::sensor {

using geom::Vec3;

namespace {

constexpr double kRayEps = 1e-9;

struct Hit {
    double t = std::numeric_limits<double>::infinity();
    Vec3 normal;  // local frame
    bool ok = false;
};

Hit intersect_box(const Vec3& o, const Vec3& d, const Vec3& size) {
    Vec3 half = size * 0.5;
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    int axis = -1;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(d[i]) < 1e-15) {
            if (o[i] < -half[i] || o[i] > half[i]) return {};
            continue;
        }
        double t0 = (-half[i] - o[i]) / d[i];
        double t1 = (half[i] - o[i]) / d[i];
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > tmin) {
            tmin = t0;
            axis = i;
        }
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return {};
    }
    if (tmin <= kRayEps || axis < 0) return {};  // rays starting inside do not hit
    Hit h;
    h.t = tmin;
    h.ok = true;
    Vec3 n;
    n[axis] = d[axis] > 0.0 ? -1.0 : 1.0;
    h.normal = n;
    return h;
}

Hit intersect_cylinder(const Vec3& o, const Vec3& d, double radius, double height) {
    Hit best;
    double hh = height * 0.5;

    // Lateral surface.
    double a = d.x * d.x + d.y * d.y;
    if (a > 1e-15) {
        double b = 2.0 * (o.x * d.x + o.y * d.y);
        double c = o.x * o.x + o.y * o.y - radius * radius;
        double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
                if (t <= kRayEps || t >= best.t) continue;
                double z = o.z + t * d.z;
                if (z < -hh || z > hh) continue;
                best.t = t;
                best.ok = true;
                Vec3 p = o + d * t;
                best.normal = Vec3{p.x, p.y, 0.0} / radius;
            }
        }
    }

    // End caps.
    if (std::abs(d.z) > 1e-15) {
        for (double zcap : {-hh, hh}) {
            double t = (zcap - o.z) / d.z;
            if (t <= kRayEps || t >= best.t) continue;
            double px = o.x + t * d.x, py = o.y + t * d.y;
            if (px * px + py * py > radius * radius) continue;
            best.t = t;
            best.ok = true;
            best.normal = Vec3{0.0, 0.0, zcap > 0.0 ? 1.0 : -1.0};
        }
    }
    return best;
}

Hit intersect_mesh(const Vec3& o, const Vec3& d, const ScenePrimitive& prim) {
    Hit best;
    for (const auto& f : prim.mesh_faces) {
        const Vec3& v0 = prim.mesh_vertices[static_cast<size_t>(f[0])];
        const Vec3& v1 = prim.mesh_vertices[static_cast<size_t>(f[1])];
        const Vec3& v2 = prim.mesh_vertices[static_cast<size_t>(f[2])];
        // Moller-Trumbore
        Vec3 e1 = v1 - v0, e2 = v2 - v0;
        Vec3 pv = cross(d, e2);
        double det = dot(e1, pv);
        if (std::abs(det) < 1e-15) continue;
        double inv = 1.0 / det;
        Vec3 tv = o - v0;
        double u = dot(tv, pv) * inv;
        if (u < -1e-12 || u > 1.0 + 1e-12) continue;
        Vec3 qv = cross(tv, e1);
        double v = dot(d, qv) * inv;
        if (v < -1e-12 || u + v > 1.0 + 1e-12) continue;
        double t = dot(e2, qv) * inv;
        if (t <= kRayEps || t >= best.t) continue;
        best.t = t;
        best.ok = true;
        best.normal = geom::normalized(cross(e1, e2));
    }
    return best;
}

Hit intersect_local(const ScenePrimitive& prim, const Vec3& o, const Vec3& d) {
    switch (prim.kind) {
        case PrimitiveKind::Box: return intersect_box(o, d, prim.box_size);
        case PrimitiveKind::Cylinder: return intersect_cylinder(o, d, prim.radius, prim.height);
        case PrimitiveKind::Mesh: return intersect_mesh(o, d, prim);
    }
    return {};
}

}  // namespace

void ScenePrimitive::validate() const {
    switch (kind) {
        case PrimitiveKind::Cylinder:
            if (radius <= 0.0 || height <= 0.0)
                throw std::invalid_argument("cylinder dimensions must be positive");
            break;
        case PrimitiveKind::Box:
            if (box_size.x <= 0.0 || box_size.y <= 0.0 || box_size.z <= 0.0)
                throw std::invalid_argument("box dimensions must be positive");
            break;
        case PrimitiveKind::Mesh:
            if (mesh_vertices.empty() || mesh_faces.empty())
                throw std::invalid_argument("mesh primitive needs vertices and faces");
            for (const auto& f : mesh_faces)
                for (int i : f)
                    if (i < 0 || static_cast<size_t>(i) >= mesh_vertices.size())
                        throw std::invalid_argument("mesh face index out of range");
            break;
    }
    if (albedo < 0.0 || albedo > 1.0) throw std::invalid_argument("albedo must be in [0,1]");
    if (instance_id < 0) throw std::invalid_argument("instance id must be non-negative");
}

PointFrame render_frame(const std::vector<ScenePrimitive>& scene, const CameraModel& camera,
                        const RenderOptions& opts) {
    camera.validate();
    for (const auto& p : scene) p.validate();

    // Precompute inverse poses once per primitive.
    std::vector<geom::RigidTransform> inv_pose(scene.size());
    for (size_t i = 0; i < scene.size(); ++i) inv_pose[i] = scene[i].pose.inverse();

    const Vec3 light = geom::normalized(opts.light_dir);
    const Vec3 origin = camera.position();

    PointFrame frame(camera.width, camera.height);

    parallel_for(camera.height, opts.exec, [&](int y) {
        for (int x = 0; x < camera.width; ++x) {
            Vec3 dir = camera.ray_direction(x + 0.5, y + 0.5);

            double best_t = std::numeric_limits<double>::infinity();
            int best_prim = -1;
            Vec3 best_normal;
            for (size_t i = 0; i < scene.size(); ++i) {
                Vec3 ol = inv_pose[i].apply(origin);
                Vec3 dl = inv_pose[i].apply_vector(dir);
                Hit h = intersect_local(scene[i], ol, dl);
                if (h.ok && h.t < best_t) {
                    best_t = h.t;
                    best_prim = static_cast<int>(i);
                    best_normal = scene[i].pose.apply_vector(h.normal);
                }
            }
            if (best_prim < 0) continue;

            const ScenePrimitive& prim = scene[static_cast<size_t>(best_prim)];
            Vec3 n = best_normal;
            if (dot(n, dir) > 0.0) n = -n;  // shade the side facing the camera
            double shade = prim.albedo * std::clamp(dot(n, light), 0.0, 1.0);

            size_t idx = frame.idx(x, y);
            frame.gray[idx] = static_cast<float>(std::clamp(shade, 0.0, 1.0));
            if (prim.point_return) {
                frame.valid[idx] = 1;
                frame.points[idx] = origin + dir * best_t;
                frame.ids[idx] = prim.instance_id;
            }
        }
    });
    return frame;
}

PointFrame apply_dropout(const PointFrame& frame, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("dropout probability must be in [0,1]");
    PointFrame out = frame;
    for (size_t i = 0; i < out.valid.size(); ++i) {
        if (!out.valid[i]) continue;
        if (rng.bernoulli(p)) {
            out.valid[i] = 0;
            out.points[i] = {};
            out.ids[i] = 0;
        }
    }
    return out;
}

}  // namespace capsynth::sensor
