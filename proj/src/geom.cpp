#include "capsynth/geom.hpp"

namespace capsynth::geom {

Mat3 rotation_x(double rad) {
    double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {1, 0, 0, 0, c, -s, 0, s, c};
    return r;
}

Mat3 rotation_y(double rad) {
    double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {c, 0, s, 0, 1, 0, -s, 0, c};
    return r;
}

Mat3 rotation_z(double rad) {
    double c = std::cos(rad), s = std::sin(rad);
    Mat3 r;
    r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return r;
}

Mat3 axis_angle(const Vec3& unit_axis, double rad) {
    // Rodrigues' formula.
    const Vec3& u = unit_axis;
    double c = std::cos(rad), s = std::sin(rad), t = 1.0 - c;
    Mat3 r;
    r.m = {c + u.x * u.x * t,       u.x * u.y * t - u.z * s, u.x * u.z * t + u.y * s,
           u.y * u.x * t + u.z * s, c + u.y * u.y * t,       u.y * u.z * t - u.x * s,
           u.z * u.x * t - u.y * s, u.z * u.y * t + u.x * s, c + u.z * u.z * t};
    return r;
}

Mat3 align_z_to(const Vec3& direction) {
    Vec3 d = normalized(direction);
    Vec3 z{0, 0, 1};
    Vec3 axis = cross(z, d);
    double s = norm(axis);
    double c = dot(z, d);
    if (s < 1e-12) {
        if (c > 0.0) return Mat3::identity();
        return rotation_x(kPi);  // antiparallel
    }
    return axis_angle(axis / s, std::atan2(s, c));
}

bool RigidTransform::is_orthonormal(double tol) const {
    Mat3 rtr = rotation.transposed() * rotation;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double expect = (i == j) ? 1.0 : 0.0;
            if (std::abs(rtr(i, j) - expect) > tol) return false;
        }
    return std::abs(rotation.determinant() - 1.0) <= tol;
}

}  // namespace capsynth::geom
