#include "capsynth/camera.hpp"

namespace capsynth::sensor {

using geom::Vec3;

void CameraModel::validate() const {
    if (fx <= 0.0 || fy <= 0.0) throw std::invalid_argument("camera focal lengths must be positive");
    if (width <= 0 || height <= 0) throw std::invalid_argument("camera resolution must be positive");
    if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height)
        throw std::invalid_argument("camera principal point outside image");
    if (!extrinsics.is_orthonormal())
        throw std::invalid_argument("camera extrinsics rotation not orthonormal");
}

bool CameraModel::project(const Vec3& world, double& u, double& v, double& depth) const {
    Vec3 c = extrinsics.inverse().apply(world);
    if (c.z <= 0.0) return false;
    u = fx * c.x / c.z + cx;
    v = fy * c.y / c.z + cy;
    depth = c.z;
    return true;
}

Vec3 CameraModel::backproject(double u, double v, double depth) const {
    Vec3 c{(u - cx) / fx * depth, (v - cy) / fy * depth, depth};
    return extrinsics.apply(c);
}

Vec3 CameraModel::ray_direction(double u, double v) const {
    Vec3 d{(u - cx) / fx, (v - cy) / fy, 1.0};
    return geom::normalized(extrinsics.apply_vector(d));
}

}  // namespace capsynth::sensor
