#pragma once

#include <cstdint>
#include <vector>

namespace capsynth::geom {

struct Pixel {
    int x = 0;
    int y = 0;
    bool operator==(const Pixel& o) const { return x == o.x && y == o.y; }
};

/// Convex polygon over pixel coordinates. Vertices are counter-clockwise
/// (positive-cross orientation), start at the lexicographically smallest
/// input point, and are a subset of the inputs with no three consecutive
/// collinear vertices. `degenerate` marks hulls that collapsed to a point
/// or a segment.
struct Polygon2D {
    std::vector<Pixel> vertices;
    bool degenerate = false;
};

Polygon2D convex_hull_2d(const std::vector<Pixel>& points);

/// Point-in-polygon, boundary inclusive. Handles degenerate hulls.
bool polygon_contains(const Polygon2D& poly, double px, double py, double eps = 1e-9);

double polygon_area(const Polygon2D& poly);

}  // namespace capsynth::geom
