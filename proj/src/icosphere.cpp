#include "capsynth/icosphere.hpp"

#include <cstdint>
#include <map>
#include <utility>

namespace capsynth::geom {

namespace {

Icosphere base_icosahedron() {
    Icosphere ico;
    ico.level = 1;

    // Pole-aligned icosahedron: poles at +-Z, two rings of five at
    // z = +-1/sqrt(5), lower ring offset by 36 degrees.
    const double ring_z = 1.0 / std::sqrt(5.0);
    const double ring_r = 2.0 / std::sqrt(5.0);

    ico.vertices.push_back({0, 0, 1});
    for (int i = 0; i < 5; ++i) {
        double a = 2.0 * kPi * i / 5.0;
        ico.vertices.push_back({ring_r * std::cos(a), ring_r * std::sin(a), ring_z});
    }
    for (int i = 0; i < 5; ++i) {
        double a = 2.0 * kPi * i / 5.0 + kPi / 5.0;
        ico.vertices.push_back({ring_r * std::cos(a), ring_r * std::sin(a), -ring_z});
    }
    ico.vertices.push_back({0, 0, -1});

    for (int i = 0; i < 5; ++i) {
        int j = (i + 1) % 5;
        int ui = 1 + i, uj = 1 + j;    // upper ring
        int li = 6 + i, lj = 6 + j;    // lower ring
        ico.faces.push_back({0, ui, uj});
        ico.faces.push_back({ui, li, uj});
        ico.faces.push_back({uj, li, lj});
        ico.faces.push_back({11, lj, li});
    }
    return ico;
}

Icosphere subdivide(const Icosphere& in) {
    Icosphere out;
    out.level = in.level + 1;
    out.vertices = in.vertices;

    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        Vec3 m = normalized(in.vertices[static_cast<size_t>(a)] +
                            in.vertices[static_cast<size_t>(b)]);
        int idx = static_cast<int>(out.vertices.size());
        out.vertices.push_back(m);
        midpoint.emplace(key, idx);
        return idx;
    };

    for (const auto& f : in.faces) {
        int a = f[0], b = f[1], c = f[2];
        int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.faces.push_back({a, ab, ca});
        out.faces.push_back({b, bc, ab});
        out.faces.push_back({c, ca, bc});
        out.faces.push_back({ab, bc, ca});
    }
    return out;
}

}  // namespace

Icosphere build_icosphere(int level) {
    if (level < 1) throw std::invalid_argument("icosphere level must be >= 1");
    Icosphere ico = base_icosahedron();
    for (int i = 1; i < level; ++i) ico = subdivide(ico);
    return ico;
}

}  // namespace capsynth::geom
