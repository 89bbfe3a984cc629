#pragma once

#include <map>
#include <vector>

#include "capsynth/cutout.hpp"
#include "capsynth/hull2d.hpp"
#include "capsynth/image.hpp"
#include "capsynth/parallel.hpp"
#include "capsynth/rng.hpp"

namespace capsynth::synth {

/// Photometric augmentation; each transform fires independently with its
/// probability. Ranges must contain 1.0.
struct AugmentConfig {
    double scale_min = 0.9, scale_max = 1.1;
    double scale_prob = 0.5;
    double blur_prob = 0.5;  // 3x3 mean kernel
    double brightness_min = 0.9, brightness_max = 1.1;
    double brightness_prob = 0.5;
    double contrast_min = 0.9, contrast_max = 1.1;
    double contrast_prob = 0.5;

    void validate() const;
};

struct AugmentOutcome {
    bool scaled = false, blurred = false, brightened = false, contrasted = false;
    double scale = 1.0;
};

/// Scale resamples patch and alpha together and re-tightens the bounds;
/// brightness and contrast clamp to [0,1]. Throws when scaling empties the
/// alpha mask.
seg::Cutout augment_cutout(const seg::Cutout& cutout, const AugmentConfig& cfg, Rng& rng,
                           AugmentOutcome* outcome = nullptr);

/// Paste budget and the per-class occlusion constraint. An earlier paste
/// may lose strictly less than its class limit to the union of everything
/// pasted after it.
struct SynthConfig {
    int max_instances = 30;
    double occlusion_limit_default = 0.15;
    std::map<int, double> occlusion_limit_per_class;  // e.g. short tubes get a larger limit
    int max_attempts_per_paste = 100;
    double background_swap_prob = 0.5;
    int canvas_width = 1376;
    int canvas_height = 1376;

    double occlusion_limit(int class_id) const;
    void validate() const;
};

/// Binary mask on the canvas, stored as the clipped patch plus its offset.
struct CanvasMask {
    int x0 = 0;
    int y0 = 0;
    ImageU8 bits;

    std::size_t count() const;
    seg::PixelBox bounds() const;  // tight bounds of set bits, canvas coordinates
};

/// |a intersect later_union| / |a| by exact pixel counting.
double occlusion_fraction(const CanvasMask& a, const CanvasMask& later_union);

struct PasteInstance {
    int cutout_index = -1;
    int class_id = 0;
    double center_x = 0.0, center_y = 0.0;
    double scale = 1.0;
    CanvasMask mask;
    int order = 0;
};

struct PixelLabel {
    int class_id = 0;
    seg::PixelBox box;
};

struct SynthStats {
    bool background_swapped = false;
    int attempts = 0;
    int augment_draws = 0;
    int scale_applied = 0, blur_applied = 0, brightness_applied = 0, contrast_applied = 0;
};

struct LabeledImage {
    ImageF image;
    std::vector<PasteInstance> instances;
    std::vector<PixelLabel> labels;  // tight bounds of each instance's full alpha mask
    SynthStats stats;
};

/// Source frame the caps get pasted into, with the rack hull as the region
/// for paste centers. Frame pixels outside the hull are the swappable
/// environment background.
struct RackBackground {
    ImageF frame;
    geom::Polygon2D polygon;  // in frame coordinates
};

/// With probability p, replace every pixel outside the polygon with a
/// randomly chosen background resized to the canvas.
ImageF swap_background(const ImageF& image, const geom::Polygon2D& polygon,
                       const std::vector<ImageF>& bg_pool, double p, Rng& rng,
                       bool* swapped = nullptr);

/// Rejection-sampled copy-paste with the occlusion constraint: a candidate
/// is accepted only if every earlier instance still keeps its class's
/// visible share. Stops early once a paste slot exhausts its attempts.
LabeledImage synthesize_image(const RackBackground& background,
                              const std::vector<seg::Cutout>& pool, const SynthConfig& cfg,
                              const AugmentConfig& aug, const std::vector<ImageF>& bg_pool,
                              Rng& rng);

/// One image per independent RNG stream derived from (master_seed, index);
/// output bytes do not depend on the execution policy.
std::vector<LabeledImage> synthesize_batch(const std::vector<RackBackground>& backgrounds,
                                           const std::vector<seg::Cutout>& pool,
                                           const SynthConfig& cfg, const AugmentConfig& aug,
                                           const std::vector<ImageF>& bg_pool,
                                           std::uint64_t master_seed, int count,
                                           Exec exec = Exec::Parallel);

}  // namespace capsynth::synth
