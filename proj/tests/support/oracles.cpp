#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

using capsynth::geom::cross;
using capsynth::geom::dot;
using capsynth::geom::norm;
using capsynth::geom::norm2;

HullFaces hull_faces(const ConvexShape& shape) {
    HullFaces hull;
    for (const auto& v : shape.vertices) hull.points.push_back(shape.pose.apply(v));
    const auto& pts = hull.points;
    const size_t n = pts.size();

    auto support_value = [&](const Vec3& dir) {
        double d = -std::numeric_limits<double>::infinity();
        for (const auto& p : pts) d = std::max(d, dot(dir, p));
        return d;
    };

    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = j + 1; k < n; ++k) {
                Vec3 nrm = cross(pts[j] - pts[i], pts[k] - pts[i]);
                double len = norm(nrm);
                if (len < 1e-12) continue;
                nrm = nrm / len;
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                for (const auto& p : pts) {
                    double s = dot(nrm, p - pts[i]);
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
                // keep each orientation that has every point on one side
                if (hi <= 1e-12) hull.halfspaces.emplace_back(-nrm, support_value(-nrm));
                if (lo >= -1e-12) hull.halfspaces.emplace_back(nrm, support_value(nrm));
            }
    return hull;
}

bool hull_contains(const HullFaces& hull, const Vec3& p, double tol) {
    if (hull.halfspaces.empty()) {
        // fewer than 3 distinct points or fully degenerate: fall back to
        // distance from the point set's segment span
        for (const auto& q : hull.points)
            if (norm(p - q) <= tol) return true;
        return false;
    }
    for (const auto& [n, d] : hull.halfspaces)
        if (dot(n, p) > d + tol) return false;
    return true;
}

namespace {

void project_onto(const std::vector<Vec3>& pts, const Vec3& axis, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto& p : pts) {
        double s = dot(axis, p);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
}

}  // namespace

double sat_margin(const ConvexShape& a, const ConvexShape& b) {
    std::vector<Vec3> pa, pb;
    for (const auto& v : a.vertices) pa.push_back(a.pose.apply(v));
    for (const auto& v : b.vertices) pb.push_back(b.pose.apply(v));

    std::vector<Vec3> axes;
    auto add_face_normals = [&](const std::vector<Vec3>& pts) {
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j)
                for (size_t k = j + 1; k < pts.size(); ++k) {
                    Vec3 n = cross(pts[j] - pts[i], pts[k] - pts[i]);
                    if (norm2(n) > 1e-24) axes.push_back(n);
                }
    };
    add_face_normals(pa);
    add_face_normals(pb);
    for (size_t i = 0; i < pa.size(); ++i)
        for (size_t j = i + 1; j < pa.size(); ++j)
            for (size_t k = 0; k < pb.size(); ++k)
                for (size_t l = k + 1; l < pb.size(); ++l) {
                    Vec3 n = cross(pa[j] - pa[i], pb[l] - pb[k]);
                    if (norm2(n) > 1e-24) axes.push_back(n);
                }

    double best = -std::numeric_limits<double>::infinity();
    for (const auto& raw : axes) {
        Vec3 axis = raw / norm(raw);
        double alo, ahi, blo, bhi;
        project_onto(pa, axis, alo, ahi);
        project_onto(pb, axis, blo, bhi);
        double gap = std::max(blo - ahi, alo - bhi);  // > 0: separated along this axis
        best = std::max(best, gap);
    }
    return best;
}

bool sampled_collide(const ConvexShape& a, const ConvexShape& b, Rng& rng, int samples) {
    HullFaces fa = hull_faces(a);
    HullFaces fb = hull_faces(b);

    auto probe = [&](const HullFaces& src, const HullFaces& dst) {
        for (const auto& p : src.points)
            if (hull_contains(dst, p, 1e-12)) return true;
        for (size_t i = 0; i < src.points.size(); ++i)
            for (size_t j = i + 1; j < src.points.size(); ++j)
                if (hull_contains(dst, (src.points[i] + src.points[j]) * 0.5, 1e-12)) return true;
        return false;
    };
    if (probe(fa, fb) || probe(fb, fa)) return true;

    auto random_probe = [&](const HullFaces& src, const HullFaces& dst, int count) {
        const size_t n = src.points.size();
        for (int s = 0; s < count; ++s) {
            // random convex combination of up to four vertices
            Vec3 p;
            double wsum = 0.0;
            for (int k = 0; k < 4; ++k) {
                double w = rng.uniform();
                p += src.points[rng.uniform_int(n)] * w;
                wsum += w;
            }
            if (wsum < 1e-12) continue;
            p = p / wsum;
            if (hull_contains(dst, p, 1e-12)) return true;
        }
        return false;
    };
    int half = samples / 2;
    return random_probe(fa, fb, half) || random_probe(fb, fa, half);
}

ConvexShape random_shape(Rng& rng, const Vec3& center, double radius, int n_vertices) {
    ConvexShape s;
    for (int i = 0; i < n_vertices; ++i) {
        for (;;) {
            Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            if (norm2(v) <= 1.0) {
                s.vertices.push_back(v * radius);
                break;
            }
        }
    }
    Vec3 axis{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm2(axis) < 1e-6) axis = {0, 0, 1};
    s.pose.rotation = capsynth::geom::axis_angle(capsynth::geom::normalized(axis),
                                                 rng.uniform(0, 2 * capsynth::geom::kPi));
    s.pose.translation = center;
    return s;
}

bool pip_crossing(const capsynth::geom::Polygon2D& poly, double px, double py) {
    const auto& v = poly.vertices;
    if (v.size() < 3) return false;

    // boundary first
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        double abx = b.x - a.x, aby = b.y - a.y;
        double apx = px - a.x, apy = py - a.y;
        double crossv = abx * apy - aby * apx;
        if (std::abs(crossv) > 1e-9) continue;
        double len2 = abx * abx + aby * aby;
        double t = len2 > 0 ? (apx * abx + apy * aby) / len2 : 0.0;
        if (t >= -1e-12 && t <= 1.0 + 1e-12) return true;
    }

    bool inside = false;
    for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        double xi = v[i].x, yi = v[i].y, xj = v[j].x, yj = v[j].y;
        bool crosses = ((yi > py) != (yj > py)) &&
                       (px < (xj - xi) * (py - yi) / (yj - yi) + xi);
        if (crosses) inside = !inside;
    }
    return inside;
}

}  // namespace oracle
