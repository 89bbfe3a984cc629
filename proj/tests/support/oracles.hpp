#pragma once

// Independent verification oracles. Everything here re-derives geometry
// from first principles (brute-force face enumeration, SAT over the full
// candidate axis set, dense point sampling) and must stay decoupled from
// the library's GJK/raster implementations.

#include <utility>
#include <vector>

#include "capsynth/collide.hpp"
#include "capsynth/geom.hpp"
#include "capsynth/hull2d.hpp"
#include "capsynth/rng.hpp"

namespace oracle {

using capsynth::Rng;
using capsynth::geom::ConvexShape;
using capsynth::geom::Vec3;

/// Halfspace form n.x <= d of a posed hull, found by testing every plane
/// through three posed vertices (O(n^4) brute force).
struct HullFaces {
    std::vector<Vec3> points;  // posed
    std::vector<std::pair<Vec3, double>> halfspaces;
};

HullFaces hull_faces(const ConvexShape& shape);

bool hull_contains(const HullFaces& hull, const Vec3& p, double tol = 1e-9);

/// Signed clearance from separating-axis testing over face normals of both
/// hulls plus all pairwise direction cross products: positive means
/// disjoint (exact verdict for polytopes), negative means intersecting.
double sat_margin(const ConvexShape& a, const ConvexShape& b);

/// Dense-sampling collision verdict: vertices, pairwise midpoints, and
/// `samples` random convex combinations of each hull are tested for
/// membership in the other hull.
bool sampled_collide(const ConvexShape& a, const ConvexShape& b, Rng& rng, int samples = 100000);

/// Random convex shape: vertices in a ball of `radius` around the local
/// origin, posed with a random rotation at `center`.
ConvexShape random_shape(Rng& rng, const Vec3& center, double radius, int n_vertices);

/// Ray-crossing point-in-polygon, boundary inclusive; independent of the
/// library's half-plane rasterizer.
bool pip_crossing(const capsynth::geom::Polygon2D& poly, double px, double py);

}  // namespace oracle
