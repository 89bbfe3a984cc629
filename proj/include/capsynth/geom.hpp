#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace capsynth::geom {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return v / n;
}

/// Angle between two vectors in radians, robust near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
    double c = dot(a, b);
    double s = norm(cross(a, b));
    return std::atan2(s, c);
}

constexpr double kPi = 3.14159265358979323846;
inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

/// 3x3 matrix, row-major.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }

    double operator()(int r, int c) const { return m[static_cast<size_t>(r * 3 + c)]; }
    double& operator()(int r, int c) { return m[static_cast<size_t>(r * 3 + c)]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    double determinant() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }
};

Mat3 rotation_x(double rad);
Mat3 rotation_y(double rad);
Mat3 rotation_z(double rad);
Mat3 axis_angle(const Vec3& unit_axis, double rad);

/// Minimal rotation taking +Z onto the given direction (need not be unit).
Mat3 align_z_to(const Vec3& direction);

/// Rigid body transform: orthonormal rotation (det +1) plus translation.
struct RigidTransform {
    Mat3 rotation;
    Vec3 translation;

    static RigidTransform identity() { return RigidTransform{}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    Vec3 apply_vector(const Vec3& v) const { return rotation * v; }

    RigidTransform inverse() const {
        RigidTransform inv;
        inv.rotation = rotation.transposed();
        inv.translation = -(inv.rotation * translation);
        return inv;
    }

    RigidTransform operator*(const RigidTransform& o) const {
        RigidTransform r;
        r.rotation = rotation * o.rotation;
        r.translation = rotation * o.translation + translation;
        return r;
    }

    bool is_orthonormal(double tol = 1e-9) const;
};

/// Axis-aligned box in 3D.
struct Box3 {
    Vec3 min;
    Vec3 max;

    bool contains(const Vec3& p, double eps = 0.0) const {
        return p.x >= min.x - eps && p.x <= max.x + eps && p.y >= min.y - eps &&
               p.y <= max.y + eps && p.z >= min.z - eps && p.z <= max.z + eps;
    }
    Vec3 extents() const { return max - min; }
};

}  // namespace capsynth::geom
