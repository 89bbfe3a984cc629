#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capsynth/geom.hpp"

namespace capsynth::sensor {

/// Registered sensor frame: gray intensity plus a per-pixel 3D point map
/// with ground-truth instance ids. A pixel has a point iff it has an id;
/// validity is an explicit mask, never a sentinel coordinate.
struct PointFrame {
    int width = 0;
    int height = 0;
    std::vector<float> gray;          // [0,1]
    std::vector<std::uint8_t> valid;  // 0/1
    std::vector<geom::Vec3> points;   // world frame, meaningful iff valid
    std::vector<std::int32_t> ids;    // meaningful iff valid

    PointFrame() = default;
    PointFrame(int w, int h)
        : width(w),
          height(h),
          gray(static_cast<size_t>(w) * h, 0.0f),
          valid(static_cast<size_t>(w) * h, 0),
          points(static_cast<size_t>(w) * h),
          ids(static_cast<size_t>(w) * h, 0) {}

    std::size_t idx(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    bool is_valid(int x, int y) const { return valid[idx(x, y)] != 0; }
    std::size_t valid_count() const;
};

/// On-disk layout for stem S under dir D:
///   D/S.gray.png    8-bit gray PNG
///   D/S.points.bin  16-byte header (magic "CSPF", u32 width, u32 height,
///                   u32 zero), then height*width*3 little-endian float32;
///                   NaN triples mark invalid pixels
///   D/S.ids.png     16-bit gray PNG storing id+1 (0 = no point)
void save_point_frame(const std::string& dir, const std::string& stem, const PointFrame& frame);
PointFrame load_point_frame(const std::string& dir, const std::string& stem);

}  // namespace capsynth::sensor
