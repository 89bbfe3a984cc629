#include <doctest.h>

#include <map>
#include <set>

#include "capsynth/icosphere.hpp"

using namespace capsynth;
using geom::Icosphere;
using geom::Vec3;

TEST_CASE("vertex counts follow 10*4^(level-1)+2") {
    // level 4 is the 642-vertex sphere the rotation sampling is built on
    const std::map<int, size_t> expected{{1, 12}, {2, 42}, {3, 162}, {4, 642}, {5, 2562}};
    for (const auto& [level, count] : expected) {
        Icosphere ico = geom::build_icosphere(level);
        CHECK(ico.vertices.size() == count);
        CHECK(ico.vertices.size() == geom::icosphere_vertex_count(level));
        CHECK(ico.faces.size() == size_t(20) << (2 * (level - 1)));
    }
}

TEST_CASE("level zero is rejected") {
    CHECK_THROWS_AS(geom::build_icosphere(0), std::invalid_argument);
}

TEST_CASE("all vertices are unit length") {
    for (int level : {1, 2, 3, 4}) {
        Icosphere ico = geom::build_icosphere(level);
        for (const auto& v : ico.vertices) CHECK(std::abs(geom::norm(v) - 1.0) < 1e-9);
    }
}

TEST_CASE("poles sit exactly on the z axis") {
    Icosphere ico = geom::build_icosphere(4);
    bool top = false, bottom = false;
    for (const auto& v : ico.vertices) {
        if (v.x == 0.0 && v.y == 0.0 && v.z == 1.0) top = true;
        if (v.x == 0.0 && v.y == 0.0 && v.z == -1.0) bottom = true;
    }
    CHECK(top);
    CHECK(bottom);
}

TEST_CASE("base icosahedron edges all have equal length") {
    Icosphere ico = geom::build_icosphere(1);
    std::set<std::pair<int, int>> edges;
    for (const auto& f : ico.faces)
        for (int k = 0; k < 3; ++k) {
            int a = f[static_cast<size_t>(k)], b = f[static_cast<size_t>((k + 1) % 3)];
            edges.insert(std::minmax(a, b));
        }
    CHECK(edges.size() == 30);
    double ref = -1.0;
    for (const auto& [a, b] : edges) {
        double len = geom::norm(ico.vertices[static_cast<size_t>(a)] -
                                ico.vertices[static_cast<size_t>(b)]);
        if (ref < 0) ref = len;
        CHECK(std::abs(len - ref) < 1e-9);
    }
}

TEST_CASE("faces wind outward") {
    for (int level : {1, 3}) {
        Icosphere ico = geom::build_icosphere(level);
        for (const auto& f : ico.faces) {
            const Vec3& a = ico.vertices[static_cast<size_t>(f[0])];
            const Vec3& b = ico.vertices[static_cast<size_t>(f[1])];
            const Vec3& c = ico.vertices[static_cast<size_t>(f[2])];
            Vec3 centroid = (a + b + c) / 3.0;
            CHECK(geom::dot(geom::cross(b - a, c - a), centroid) > 0.0);
        }
    }
}

TEST_CASE("construction is deterministic") {
    Icosphere a = geom::build_icosphere(3);
    Icosphere b = geom::build_icosphere(3);
    REQUIRE(a.vertices.size() == b.vertices.size());
    for (size_t i = 0; i < a.vertices.size(); ++i) {
        CHECK(a.vertices[i].x == b.vertices[i].x);
        CHECK(a.vertices[i].y == b.vertices[i].y);
        CHECK(a.vertices[i].z == b.vertices[i].z);
    }
    CHECK(a.faces == b.faces);
}
