#include <doctest.h>

#include "capsynth/geom.hpp"
#include "capsynth/rng.hpp"

using namespace capsynth;
using geom::Mat3;
using geom::RigidTransform;
using geom::Vec3;

namespace {

RigidTransform random_transform(Rng& rng) {
    Vec3 axis{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (geom::norm2(axis) < 1e-9) axis = {1, 0, 0};
    RigidTransform t;
    t.rotation = geom::axis_angle(geom::normalized(axis), rng.uniform(0, 2 * geom::kPi));
    t.translation = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    return t;
}

}  // namespace

TEST_CASE("elementary rotations are orthonormal with det +1") {
    for (double angle : {0.0, 0.3, -1.2, geom::kPi, 5.9}) {
        for (const Mat3& r : {geom::rotation_x(angle), geom::rotation_y(angle),
                              geom::rotation_z(angle)}) {
            RigidTransform t{r, {}};
            CHECK(t.is_orthonormal(1e-12));
        }
    }
}

TEST_CASE("transform composed with its inverse is the identity") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        RigidTransform t = random_transform(rng);
        RigidTransform id = t * t.inverse();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                CHECK(id.rotation(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(0).scale(0)
                                               .epsilon(1e-9));
        CHECK(geom::norm(id.translation) < 1e-9);

        Vec3 p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(geom::norm(t.inverse().apply(t.apply(p)) - p) < 1e-9);
    }
}

TEST_CASE("align_z_to maps +Z onto the requested direction") {
    Rng rng(12);
    auto check_dir = [](const Vec3& dir) {
        Mat3 r = geom::align_z_to(dir);
        Vec3 mapped = r * Vec3{0, 0, 1};
        CHECK(geom::norm(mapped - geom::normalized(dir)) < 1e-9);
        RigidTransform t{r, {}};
        CHECK(t.is_orthonormal(1e-9));
    };
    check_dir({0, 0, 1});
    check_dir({0, 0, -1});
    check_dir({1, 0, 0});
    for (int i = 0; i < 100; ++i) {
        Vec3 d{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (geom::norm2(d) < 1e-6) continue;
        check_dir(d);
    }
}

TEST_CASE("angle_between matches known values") {
    CHECK(geom::angle_between({1, 0, 0}, {1, 0, 0}) == doctest::Approx(0.0));
    CHECK(geom::angle_between({1, 0, 0}, {0, 1, 0}) == doctest::Approx(geom::kPi / 2));
    CHECK(geom::angle_between({1, 0, 0}, {-1, 0, 0}) == doctest::Approx(geom::kPi));
    CHECK(geom::rad_to_deg(geom::angle_between({0, 0, 1}, {1, 0, 1})) == doctest::Approx(45.0));
}

TEST_CASE("normalizing the zero vector fails") {
    CHECK_THROWS_AS(geom::normalized({0, 0, 0}), std::invalid_argument);
}
