#pragma once

#include <map>
#include <vector>

#include "capsynth/cutout.hpp"
#include "capsynth/geom.hpp"
#include "capsynth/hull2d.hpp"
#include "capsynth/point_frame.hpp"

namespace capsynth::seg {

/// Axis-aligned box in the robot hand's local frame that isolates the held
/// object's points. Manual per-face offsets stand in for interactive box
/// adjustment; the effective box must stay non-degenerate.
struct AnnotationMask {
    geom::Box3 box;  // fitted, before offsets
    geom::Vec3 offset_min;  // added to box.min
    geom::Vec3 offset_max;  // added to box.max

    geom::Box3 effective() const { return {box.min + offset_min, box.max + offset_max}; }
    bool contains(const geom::Vec3& p) const { return effective().contains(p); }
    void validate() const;
};

/// Transform each frame's valid points above the fingertip plane
/// (hand-frame z > finger_top_height) into the hand frame and concatenate.
std::vector<geom::Vec3> merge_in_hand_frame(const std::vector<sensor::PointFrame>& frames,
                                            const std::vector<geom::RigidTransform>& hand_poses,
                                            double finger_top_height);

/// Per-axis box from the trim and 1-trim coordinate quantiles, then manual
/// offsets. Robust against reflection outliers for small trim fractions.
AnnotationMask fit_annotation_mask(const std::vector<geom::Vec3>& cloud, double trim_fraction,
                                   const geom::Vec3& offset_min = {},
                                   const geom::Vec3& offset_max = {});

/// Pixels whose valid point falls inside the mask when expressed in the
/// hand frame.
std::vector<geom::Pixel> extract_cap_pixels(const sensor::PointFrame& frame,
                                            const geom::RigidTransform& hand_pose,
                                            const AnnotationMask& mask);

/// Rasterized convex hull of the pixel set as the alpha mask, gray values
/// cropped to the hull's tight bounds. Disconnected pixels merge into one
/// region by construction.
Cutout hull_crop(const sensor::PointFrame& frame, const std::vector<geom::Pixel>& pixels);

struct RackSegment {
    Cutout cutout;
    geom::Polygon2D polygon;               // paste region, image coordinates
    std::vector<std::size_t> other_regions;  // pixel counts of non-largest regions
};

/// Pixels with point height in (table_height + eps, table_height + band]
/// form rack candidates; the largest 8-connected region becomes the rack,
/// remaining regions are reported by size.
RackSegment segment_rack(const sensor::PointFrame& frame, double table_height, double band);

/// Nearest class by 95th-percentile point height above the table inside
/// the box; ties go to the lower class id.
int disambiguate_by_height(const sensor::PointFrame& frame, const PixelBox& bbox,
                           const std::map<int, double>& class_heights, double table_height);

}  // namespace capsynth::seg
