#include "capsynth/hull2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace capsynth::geom {

namespace {

long long cross_ll(const Pixel& o, const Pixel& a, const Pixel& b) {
    return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

double cross_d(const Pixel& a, const Pixel& b, double px, double py) {
    return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

double point_segment_dist(const Pixel& a, const Pixel& b, double px, double py) {
    double abx = b.x - a.x, aby = b.y - a.y;
    double apx = px - a.x, apy = py - a.y;
    double len2 = abx * abx + aby * aby;
    double t = len2 > 0.0 ? std::clamp((apx * abx + apy * aby) / len2, 0.0, 1.0) : 0.0;
    double dx = apx - t * abx, dy = apy - t * aby;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

Polygon2D convex_hull_2d(const std::vector<Pixel>& points) {
    if (points.empty()) throw std::invalid_argument("convex_hull_2d: empty input");

    std::vector<Pixel> pts = points;
    std::sort(pts.begin(), pts.end(),
              [](const Pixel& a, const Pixel& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    Polygon2D out;
    const size_t n = pts.size();
    if (n == 1) {
        out.vertices = {pts[0]};
        out.degenerate = true;
        return out;
    }

    // Andrew's monotone chain; cross <= 0 popped, so collinear points drop out.
    std::vector<Pixel> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross_ll(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross_ll(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point repeats the first

    out.vertices = std::move(hull);
    out.degenerate = out.vertices.size() < 3;
    return out;
}

bool polygon_contains(const Polygon2D& poly, double px, double py, double eps) {
    const auto& v = poly.vertices;
    if (v.empty()) return false;
    if (v.size() == 1) return std::abs(px - v[0].x) <= eps && std::abs(py - v[0].y) <= eps;
    if (v.size() == 2) return point_segment_dist(v[0], v[1], px, py) <= eps;

    for (size_t i = 0; i < v.size(); ++i) {
        const Pixel& a = v[i];
        const Pixel& b = v[(i + 1) % v.size()];
        if (cross_d(a, b, px, py) < -eps) return false;
    }
    return true;
}

double polygon_area(const Polygon2D& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) return 0.0;
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Pixel& a = v[i];
        const Pixel& b = v[(i + 1) % v.size()];
        s += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
    }
    return 0.5 * s;
}

}  // namespace capsynth::geom
