#pragma once

#include "capsynth/geom.hpp"

namespace capsynth::sensor {

/// Pinhole camera. Camera frame: +Z forward, +X right, +Y down (matches
/// image row direction), extrinsics map camera to world. Continuous pixel
/// coordinates put the center of pixel (i, j) at (i + 0.5, j + 0.5).
struct CameraModel {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
    geom::RigidTransform extrinsics;

    void validate() const;

    geom::Vec3 position() const { return extrinsics.translation; }

    /// World point to continuous pixel coordinates and camera depth.
    /// False when the point is at or behind the image plane.
    bool project(const geom::Vec3& world, double& u, double& v, double& depth) const;

    /// Inverse of project for a given depth; exact up to rounding.
    geom::Vec3 backproject(double u, double v, double depth) const;

    bool in_image(double u, double v) const {
        return u >= 0.0 && u < static_cast<double>(width) && v >= 0.0 &&
               v < static_cast<double>(height);
    }

    /// World-frame unit ray direction through continuous pixel (u, v).
    geom::Vec3 ray_direction(double u, double v) const;
};

}  // namespace capsynth::sensor
