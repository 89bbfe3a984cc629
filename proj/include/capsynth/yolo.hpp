#pragma once

#include <string>
#include <vector>

#include "capsynth/cutout.hpp"

namespace capsynth::data {

/// Normalized detection label: box center and size as fractions of the
/// image, all within the unit square.
struct Label {
    int class_id = 0;
    double cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;

    void validate() const;
};

/// One `class cx cy w h` line per label, floats with exactly six decimals,
/// newline terminated, order preserved.
std::string emit_yolo(const std::vector<Label>& labels);

/// Inverse of emit_yolo up to float formatting; extra whitespace tolerated,
/// malformed lines raise with their line number.
std::vector<Label> parse_yolo(const std::string& text);

/// Inclusive pixel box to a normalized label, clamped to the unit square.
/// `clamped` reports whether clamping changed the box.
Label label_from_pixel_box(const seg::PixelBox& box, int image_w, int image_h, int class_id,
                           bool* clamped = nullptr);

/// Back to inclusive pixel bounds.
seg::PixelBox pixel_box_from_label(const Label& label, int image_w, int image_h);

}  // namespace capsynth::data
