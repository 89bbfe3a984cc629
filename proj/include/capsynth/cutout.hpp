#pragma once

#include <string>

#include "capsynth/image.hpp"

namespace capsynth::seg {

/// Inclusive pixel bounds.
struct PixelBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};

/// Alpha-masked image patch of a segmented object region. The patch is
/// cropped to the tight bounds of alpha > 0; `anchor` is the patch's pixel
/// box in the source frame.
struct Cutout {
    ImageF patch;    // gray values
    ImageU8 alpha;   // {0,1}
    int class_id = 0;
    int pose_id = -1;   // provenance
    int frame_id = -1;  // provenance
    PixelBox anchor;

    std::size_t alpha_count() const;
    /// Throws unless alpha is non-empty and bounds are tight.
    void validate() const;
};

/// Stored as RGBA PNG (gray replicated, alpha 0/255) plus a JSON sidecar
/// next to it (same stem, .json) with class and provenance.
void save_cutout(const std::string& png_path, const Cutout& cutout);
Cutout load_cutout(const std::string& png_path);

}  // namespace capsynth::seg
