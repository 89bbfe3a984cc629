#include "capsynth/collide.hpp"

#include <initializer_list>
#include <limits>
#include <stdexcept>

namespace capsynth::geom {

Vec3 support(const ConvexShape& shape, const Vec3& dir) {
    if (shape.vertices.empty()) throw std::invalid_argument("support: shape has no vertices");
    double best = -std::numeric_limits<double>::infinity();
    Vec3 bp;
    for (const auto& v : shape.vertices) {
        Vec3 p = shape.pose.apply(v);
        double d = dot(p, dir);
        if (d > best) {
            best = d;
            bp = p;
        }
    }
    return bp;
}

namespace {

constexpr double kTol = 1e-9;
constexpr int kMaxIter = 64;

Vec3 minkowski_support(const ConvexShape& a, const ConvexShape& b, const Vec3& d) {
    return support(a, d) - support(b, -d);
}

Vec3 triple_cross(const Vec3& a, const Vec3& b, const Vec3& c) {
    return cross(cross(a, b), c);
}

Vec3 centroid(const ConvexShape& s) {
    Vec3 c;
    for (const auto& v : s.vertices) c += s.pose.apply(v);
    return c / static_cast<double>(s.vertices.size());
}

struct Simplex {
    Vec3 p[4];
    int count = 0;
    void push(const Vec3& v) { p[count++] = v; }
    void set(std::initializer_list<Vec3> vs) {
        count = 0;
        for (const auto& v : vs) p[count++] = v;
    }
};

// Newest point is p[count-1]. Returns true when the simplex contains the
// origin; otherwise retains the closest feature and points `dir` at the
// origin.
bool update_line(Simplex& s, Vec3& dir) {
    Vec3 A = s.p[1], B = s.p[0];
    Vec3 ab = B - A, ao = -A;
    if (dot(ab, ao) > 0.0) {
        dir = triple_cross(ab, ao, ab);
        if (norm2(dir) < kTol * kTol) return true;  // origin on the segment
    } else {
        s.set({A});
        dir = ao;
    }
    return false;
}

bool update_triangle(Simplex& s, Vec3& dir) {
    Vec3 A = s.p[2], B = s.p[1], C = s.p[0];
    Vec3 ab = B - A, ac = C - A, ao = -A;
    Vec3 n = cross(ab, ac);

    if (dot(cross(n, ac), ao) > 0.0) {
        if (dot(ac, ao) > 0.0) {
            s.set({C, A});
            dir = triple_cross(ac, ao, ac);
            if (norm2(dir) < kTol * kTol) return true;
            return false;
        }
        s.set({B, A});
        return update_line(s, dir);
    }
    if (dot(cross(ab, n), ao) > 0.0) {
        s.set({B, A});
        return update_line(s, dir);
    }

    double side = dot(n, ao);
    if (side > 0.0) {
        dir = n;
        return false;
    }
    if (side < 0.0) {
        s.set({B, C, A});
        dir = -n;
        return false;
    }
    return true;  // origin in the triangle's plane and interior
}

bool update_tetrahedron(Simplex& s, Vec3& dir) {
    Vec3 A = s.p[3], B = s.p[2], C = s.p[1], D = s.p[0];
    Vec3 ab = B - A, ac = C - A, ad = D - A, ao = -A;

    // Outward normals of the three faces containing A.
    Vec3 nABC = cross(ab, ac);
    if (dot(nABC, ad) > 0.0) nABC = -nABC;
    Vec3 nACD = cross(ac, ad);
    if (dot(nACD, ab) > 0.0) nACD = -nACD;
    Vec3 nADB = cross(ad, ab);
    if (dot(nADB, ac) > 0.0) nADB = -nADB;

    if (dot(nABC, ao) > 0.0) {
        s.set({C, B, A});
        return update_triangle(s, dir);
    }
    if (dot(nACD, ao) > 0.0) {
        s.set({D, C, A});
        return update_triangle(s, dir);
    }
    if (dot(nADB, ao) > 0.0) {
        s.set({B, D, A});
        return update_triangle(s, dir);
    }
    return true;  // origin inside
}

bool update_simplex(Simplex& s, Vec3& dir) {
    switch (s.count) {
        case 2: return update_line(s, dir);
        case 3: return update_triangle(s, dir);
        case 4: return update_tetrahedron(s, dir);
        default: return false;
    }
}

}  // namespace

bool convex_collide(const ConvexShape& a, const ConvexShape& b) {
    if (a.vertices.empty() || b.vertices.empty())
        throw std::invalid_argument("convex_collide: empty shape");

    Vec3 d = centroid(a) - centroid(b);
    if (norm2(d) < kTol * kTol) d = {1, 0, 0};

    Simplex s;
    s.push(minkowski_support(a, b, d));
    d = -s.p[0];

    for (int iter = 0; iter < kMaxIter; ++iter) {
        double dn = norm(d);
        if (dn < kTol) return true;  // origin on the current feature

        Vec3 A = minkowski_support(a, b, d);
        if (dot(A, d) < -kTol * dn) return false;

        // Support already in the simplex means the closest feature is final;
        // the separation is below tolerance, which counts as contact.
        for (int i = 0; i < s.count; ++i)
            if (norm2(A - s.p[i]) < kTol * kTol) return true;

        s.push(A);
        if (update_simplex(s, d)) return true;
    }
    return true;  // no convergence: near-touching
}

}  // namespace capsynth::geom
