#include "capsynth/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace capsynth::seg {

using geom::Pixel;
using geom::Vec3;
using sensor::PointFrame;

namespace {

constexpr double kRackHeightEps = 1e-4;  // excludes the table plane itself

double quantile(std::vector<double>& values, double q) {
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    size_t i = static_cast<size_t>(pos);
    double frac = pos - static_cast<double>(i);
    if (i + 1 >= values.size()) return values.back();
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

}  // namespace

void AnnotationMask::validate() const {
    geom::Box3 e = effective();
    if (!(e.min.x < e.max.x && e.min.y < e.max.y && e.min.z < e.max.z))
        throw std::runtime_error("annotation mask box is degenerate after offsets");
}

std::vector<Vec3> merge_in_hand_frame(const std::vector<PointFrame>& frames,
                                      const std::vector<geom::RigidTransform>& hand_poses,
                                      double finger_top_height) {
    if (frames.size() != hand_poses.size())
        throw std::invalid_argument("merge_in_hand_frame: frames and hand_poses differ in length");

    std::vector<Vec3> cloud;
    for (size_t f = 0; f < frames.size(); ++f) {
        const geom::RigidTransform world_to_hand = hand_poses[f].inverse();
        const PointFrame& frame = frames[f];
        for (size_t i = 0; i < frame.valid.size(); ++i) {
            if (!frame.valid[i]) continue;
            Vec3 p = world_to_hand.apply(frame.points[i]);
            if (p.z > finger_top_height) cloud.push_back(p);
        }
    }
    return cloud;
}

AnnotationMask fit_annotation_mask(const std::vector<Vec3>& cloud, double trim_fraction,
                                   const Vec3& offset_min, const Vec3& offset_max) {
    if (cloud.size() < 10)
        throw std::invalid_argument("fit_annotation_mask: need at least 10 points");
    if (trim_fraction < 0.0 || trim_fraction >= 0.5)
        throw std::invalid_argument("fit_annotation_mask: trim fraction must be in [0,0.5)");

    AnnotationMask mask;
    mask.offset_min = offset_min;
    mask.offset_max = offset_max;
    for (int axis = 0; axis < 3; ++axis) {
        std::vector<double> coords;
        coords.reserve(cloud.size());
        for (const auto& p : cloud) coords.push_back(p[axis]);
        mask.box.min[axis] = quantile(coords, trim_fraction);
        mask.box.max[axis] = quantile(coords, 1.0 - trim_fraction);
    }
    mask.validate();
    return mask;
}

std::vector<Pixel> extract_cap_pixels(const PointFrame& frame,
                                      const geom::RigidTransform& hand_pose,
                                      const AnnotationMask& mask) {
    const geom::RigidTransform world_to_hand = hand_pose.inverse();
    const geom::Box3 box = mask.effective();

    std::vector<Pixel> pixels;
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x) {
            size_t i = frame.idx(x, y);
            if (!frame.valid[i]) continue;
            if (box.contains(world_to_hand.apply(frame.points[i]))) pixels.push_back({x, y});
        }
    return pixels;
}

Cutout hull_crop(const PointFrame& frame, const std::vector<Pixel>& pixels) {
    if (pixels.empty()) throw std::invalid_argument("hull_crop: empty pixel set");

    geom::Polygon2D hull = geom::convex_hull_2d(pixels);

    int x0 = std::numeric_limits<int>::max(), y0 = x0;
    int x1 = std::numeric_limits<int>::min(), y1 = x1;
    for (const auto& v : hull.vertices) {
        x0 = std::min(x0, v.x);
        y0 = std::min(y0, v.y);
        x1 = std::max(x1, v.x);
        y1 = std::max(y1, v.y);
    }

    Cutout cut;
    cut.anchor = {x0, y0, x1, y1};
    cut.patch = ImageF(x1 - x0 + 1, y1 - y0 + 1, 0.0f);
    cut.alpha = ImageU8(x1 - x0 + 1, y1 - y0 + 1, 0);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            if (!geom::polygon_contains(hull, x, y)) continue;
            cut.alpha.at(x - x0, y - y0) = 1;
            if (frame.width > 0 && x >= 0 && x < frame.width && y >= 0 && y < frame.height)
                cut.patch.at(x - x0, y - y0) = frame.gray[frame.idx(x, y)];
        }
    cut.validate();
    return cut;
}

RackSegment segment_rack(const PointFrame& frame, double table_height, double band) {
    std::vector<std::uint8_t> qualifies(frame.valid.size(), 0);
    size_t n_qual = 0;
    for (size_t i = 0; i < frame.valid.size(); ++i) {
        if (!frame.valid[i]) continue;
        double h = frame.points[i].z;
        if (h > table_height + kRackHeightEps && h <= table_height + band) {
            qualifies[i] = 1;
            ++n_qual;
        }
    }
    if (n_qual == 0) throw std::runtime_error("segment_rack: no points in the rack height band");

    // 8-connected components over qualifying pixels.
    std::vector<int> component(frame.valid.size(), -1);
    std::vector<std::vector<Pixel>> regions;
    for (int y = 0; y < frame.height; ++y)
        for (int x = 0; x < frame.width; ++x) {
            size_t i = frame.idx(x, y);
            if (!qualifies[i] || component[i] >= 0) continue;
            int id = static_cast<int>(regions.size());
            regions.emplace_back();
            std::deque<Pixel> queue{{x, y}};
            component[i] = id;
            while (!queue.empty()) {
                Pixel p = queue.front();
                queue.pop_front();
                regions[static_cast<size_t>(id)].push_back(p);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = p.x + dx, ny = p.y + dy;
                        if (nx < 0 || nx >= frame.width || ny < 0 || ny >= frame.height) continue;
                        size_t ni = frame.idx(nx, ny);
                        if (!qualifies[ni] || component[ni] >= 0) continue;
                        component[ni] = id;
                        queue.push_back({nx, ny});
                    }
            }
        }

    size_t largest = 0;
    for (size_t r = 1; r < regions.size(); ++r)
        if (regions[r].size() > regions[largest].size()) largest = r;

    RackSegment seg;
    seg.cutout = hull_crop(frame, regions[largest]);
    seg.polygon = geom::convex_hull_2d(regions[largest]);
    for (size_t r = 0; r < regions.size(); ++r)
        if (r != largest) seg.other_regions.push_back(regions[r].size());
    return seg;
}

int disambiguate_by_height(const PointFrame& frame, const PixelBox& bbox,
                           const std::map<int, double>& class_heights, double table_height) {
    if (class_heights.empty())
        throw std::invalid_argument("disambiguate_by_height: no class heights given");

    std::vector<double> heights;
    for (int y = std::max(0, bbox.y0); y <= std::min(frame.height - 1, bbox.y1); ++y)
        for (int x = std::max(0, bbox.x0); x <= std::min(frame.width - 1, bbox.x1); ++x) {
            size_t i = frame.idx(x, y);
            if (frame.valid[i]) heights.push_back(frame.points[i].z);
        }
    if (heights.empty())
        throw std::runtime_error("disambiguate_by_height: no valid points in box");

    double measured = quantile(heights, 0.95) - table_height;

    int best_class = class_heights.begin()->first;
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& [cls, h] : class_heights) {
        double err = std::abs(h - measured);
        if (err < best_err) {  // map order makes ties keep the lower class id
            best_err = err;
            best_class = cls;
        }
    }
    return best_class;
}

}  // namespace capsynth::seg
