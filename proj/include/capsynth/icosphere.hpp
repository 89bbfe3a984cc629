#pragma once

#include <array>
#include <vector>

#include "capsynth/geom.hpp"

namespace capsynth::geom {

/// Spherical polyhedron from recursive icosahedron subdivision.
/// Level k means k-1 subdivision rounds, so vertex count is 10*4^(k-1)+2
/// (level 4 -> 642). Two vertices sit exactly at the +Z and -Z poles and
/// construction order is deterministic.
struct Icosphere {
    int level = 1;
    std::vector<Vec3> vertices;                 // unit length
    std::vector<std::array<int, 3>> faces;      // outward CCW
};

Icosphere build_icosphere(int level);

/// Closed-form vertex count for a given level.
inline std::size_t icosphere_vertex_count(int level) {
    std::size_t n = 10;
    for (int i = 1; i < level; ++i) n *= 4;
    return n + 2;
}

}  // namespace capsynth::geom
