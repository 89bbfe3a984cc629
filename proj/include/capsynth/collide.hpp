#pragma once

#include <vector>

#include "capsynth/geom.hpp"

namespace capsynth::geom {

/// Convex solid given by its vertex set (hull implied) plus a pose.
struct ConvexShape {
    std::vector<Vec3> vertices;
    RigidTransform pose;

    Vec3 posed_vertex(std::size_t i) const { return pose.apply(vertices[i]); }
};

/// Farthest posed vertex of the shape along `dir`.
Vec3 support(const ConvexShape& shape, const Vec3& dir);

/// True iff the posed hulls share a point. GJK support-function iteration,
/// termination tolerance 1e-9 with a 64-iteration cap; pairs within 1e-9 of
/// touching report as colliding. Flat (coplanar) shapes are valid input.
bool convex_collide(const ConvexShape& a, const ConvexShape& b);

}  // namespace capsynth::geom
