#include "capsynth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace capsynth::synth {

using geom::Polygon2D;
using seg::Cutout;
using seg::PixelBox;

namespace {

void check_range(double lo, double hi, double prob, const char* what) {
    if (!(lo <= 1.0 && hi >= 1.0 && lo <= hi))
        throw std::invalid_argument(std::string(what) + " range must contain 1.0");
    if (prob < 0.0 || prob > 1.0)
        throw std::invalid_argument(std::string(what) + " probability must be in [0,1]");
}

Cutout rescale(const Cutout& in, double s) {
    int w = std::max(1, static_cast<int>(std::lround(in.patch.width * s)));
    int h = std::max(1, static_cast<int>(std::lround(in.patch.height * s)));

    Cutout out = in;
    out.patch = resize_bilinear(in.patch, w, h);
    ImageF a(in.alpha.width, in.alpha.height);
    for (size_t i = 0; i < a.data.size(); ++i) a.data[i] = in.alpha.data[i] ? 1.0f : 0.0f;
    ImageF ar = resize_bilinear(a, w, h);
    out.alpha = ImageU8(w, h);
    for (size_t i = 0; i < ar.data.size(); ++i) out.alpha.data[i] = ar.data[i] >= 0.5f ? 1 : 0;

    // Re-tighten to the alpha bounds.
    int x0 = w, y0 = h, x1 = -1, y1 = -1;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (out.alpha.at(x, y)) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    if (x1 < 0) throw std::runtime_error("augment_cutout: scaled alpha mask is empty");
    if (x0 != 0 || y0 != 0 || x1 != w - 1 || y1 != h - 1) {
        ImageF patch(x1 - x0 + 1, y1 - y0 + 1);
        ImageU8 alpha(x1 - x0 + 1, y1 - y0 + 1);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                patch.at(x - x0, y - y0) = out.patch.at(x, y);
                alpha.at(x - x0, y - y0) = out.alpha.at(x, y);
            }
        out.patch = std::move(patch);
        out.alpha = std::move(alpha);
    }
    return out;
}

void mean_blur_3x3(ImageF& img) {
    ImageF src = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            float sum = 0.0f;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    int sx = std::clamp(x + dx, 0, img.width - 1);
                    int sy = std::clamp(y + dy, 0, img.height - 1);
                    sum += src.at(sx, sy);
                }
            img.at(x, y) = sum / 9.0f;
        }
}

Polygon2D scale_polygon(const Polygon2D& poly, int src_w, int src_h, int dst_w, int dst_h) {
    Polygon2D out = poly;
    if (src_w == dst_w && src_h == dst_h) return out;
    double fx = static_cast<double>(dst_w) / src_w;
    double fy = static_cast<double>(dst_h) / src_h;
    for (auto& v : out.vertices) {
        v.x = static_cast<int>(std::lround(v.x * fx));
        v.y = static_cast<int>(std::lround(v.y * fy));
    }
    return out;
}

/// Pixels of `a` also set in `b`, both canvas-placed.
std::size_t overlap_count(const CanvasMask& a, const CanvasMask& b) {
    int x0 = std::max(a.x0, b.x0);
    int y0 = std::max(a.y0, b.y0);
    int x1 = std::min(a.x0 + a.bits.width, b.x0 + b.bits.width);
    int y1 = std::min(a.y0 + a.bits.height, b.y0 + b.bits.height);
    std::size_t n = 0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            n += a.bits.at(x - a.x0, y - a.y0) && b.bits.at(x - b.x0, y - b.y0);
    return n;
}

void subtract_mask(CanvasMask& a, const CanvasMask& b) {
    int x0 = std::max(a.x0, b.x0);
    int y0 = std::max(a.y0, b.y0);
    int x1 = std::min(a.x0 + a.bits.width, b.x0 + b.bits.width);
    int y1 = std::min(a.y0 + a.bits.height, b.y0 + b.bits.height);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            if (b.bits.at(x - b.x0, y - b.y0)) a.bits.at(x - a.x0, y - a.y0) = 0;
}

}  // namespace

void AugmentConfig::validate() const {
    check_range(scale_min, scale_max, scale_prob, "scale");
    check_range(brightness_min, brightness_max, brightness_prob, "brightness");
    check_range(contrast_min, contrast_max, contrast_prob, "contrast");
    if (blur_prob < 0.0 || blur_prob > 1.0)
        throw std::invalid_argument("blur probability must be in [0,1]");
}

Cutout augment_cutout(const Cutout& cutout, const AugmentConfig& cfg, Rng& rng,
                      AugmentOutcome* outcome) {
    cfg.validate();
    AugmentOutcome oc;
    Cutout out = cutout;

    if (rng.bernoulli(cfg.scale_prob)) {
        oc.scaled = true;
        oc.scale = rng.uniform(cfg.scale_min, cfg.scale_max);
        out = rescale(out, oc.scale);
    }
    if (rng.bernoulli(cfg.blur_prob)) {
        oc.blurred = true;
        mean_blur_3x3(out.patch);
    }
    if (rng.bernoulli(cfg.brightness_prob)) {
        oc.brightened = true;
        float f = static_cast<float>(rng.uniform(cfg.brightness_min, cfg.brightness_max));
        for (auto& g : out.patch.data) g = std::clamp(g * f, 0.0f, 1.0f);
    }
    if (rng.bernoulli(cfg.contrast_prob)) {
        oc.contrasted = true;
        float f = static_cast<float>(rng.uniform(cfg.contrast_min, cfg.contrast_max));
        double sum = 0.0;
        std::size_t n = 0;
        for (size_t i = 0; i < out.patch.data.size(); ++i)
            if (out.alpha.data[i]) {
                sum += out.patch.data[i];
                ++n;
            }
        float mean = n ? static_cast<float>(sum / n) : 0.5f;
        for (size_t i = 0; i < out.patch.data.size(); ++i)
            out.patch.data[i] = std::clamp((out.patch.data[i] - mean) * f + mean, 0.0f, 1.0f);
    }

    if (outcome) *outcome = oc;
    return out;
}

double SynthConfig::occlusion_limit(int class_id) const {
    auto it = occlusion_limit_per_class.find(class_id);
    return it != occlusion_limit_per_class.end() ? it->second : occlusion_limit_default;
}

void SynthConfig::validate() const {
    if (max_instances < 1) throw std::invalid_argument("max_instances must be >= 1");
    if (max_attempts_per_paste < 1)
        throw std::invalid_argument("max_attempts_per_paste must be >= 1");
    if (canvas_width <= 0 || canvas_height <= 0)
        throw std::invalid_argument("canvas size must be positive");
    if (background_swap_prob < 0.0 || background_swap_prob > 1.0)
        throw std::invalid_argument("background_swap_prob must be in [0,1]");
    auto check_t = [](double t) {
        if (t < 0.0 || t > 1.0) throw std::invalid_argument("occlusion limit must be in [0,1]");
    };
    check_t(occlusion_limit_default);
    for (const auto& [cls, t] : occlusion_limit_per_class) {
        (void)cls;
        check_t(t);
    }
}

std::size_t CanvasMask::count() const {
    std::size_t n = 0;
    for (auto b : bits.data) n += b != 0;
    return n;
}

PixelBox CanvasMask::bounds() const {
    int bx0 = bits.width, by0 = bits.height, bx1 = -1, by1 = -1;
    for (int y = 0; y < bits.height; ++y)
        for (int x = 0; x < bits.width; ++x)
            if (bits.at(x, y)) {
                bx0 = std::min(bx0, x);
                by0 = std::min(by0, y);
                bx1 = std::max(bx1, x);
                by1 = std::max(by1, y);
            }
    if (bx1 < 0) throw std::runtime_error("CanvasMask::bounds: empty mask");
    return {x0 + bx0, y0 + by0, x0 + bx1, y0 + by1};
}

double occlusion_fraction(const CanvasMask& a, const CanvasMask& later_union) {
    std::size_t total = a.count();
    if (total == 0) throw std::invalid_argument("occlusion_fraction: empty mask");
    return static_cast<double>(overlap_count(a, later_union)) / static_cast<double>(total);
}

ImageF swap_background(const ImageF& image, const Polygon2D& polygon,
                       const std::vector<ImageF>& bg_pool, double p, Rng& rng, bool* swapped) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("swap probability must be in [0,1]");
    if (p > 0.0 && bg_pool.empty())
        throw std::invalid_argument("swap_background: empty background pool");
    if (swapped) *swapped = false;
    if (p == 0.0 || !rng.bernoulli(p)) return image;

    const ImageF& chosen = bg_pool[rng.uniform_int(bg_pool.size())];
    ImageF bg = resize_bilinear(chosen, image.width, image.height);
    ImageF out = image;
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            if (!geom::polygon_contains(polygon, x, y)) out.at(x, y) = bg.at(x, y);
    if (swapped) *swapped = true;
    return out;
}

LabeledImage synthesize_image(const RackBackground& background, const std::vector<Cutout>& pool,
                              const SynthConfig& cfg, const AugmentConfig& aug,
                              const std::vector<ImageF>& bg_pool, Rng& rng) {
    cfg.validate();
    aug.validate();
    if (pool.empty()) throw std::invalid_argument("synthesize_image: empty cutout pool");
    if (cfg.background_swap_prob > 0.0 && bg_pool.empty())
        throw std::invalid_argument("synthesize_image: empty background pool with swap enabled");

    const int cw = cfg.canvas_width, ch = cfg.canvas_height;
    Polygon2D poly =
        scale_polygon(background.polygon, background.frame.width, background.frame.height, cw, ch);
    if (geom::polygon_area(poly) <= 0.0)
        throw std::invalid_argument("synthesize_image: paste polygon has zero area");

    double bx0 = std::numeric_limits<double>::max(), by0 = bx0;
    double bx1 = std::numeric_limits<double>::lowest(), by1 = bx1;
    for (const auto& v : poly.vertices) {
        bx0 = std::min(bx0, static_cast<double>(v.x));
        by0 = std::min(by0, static_cast<double>(v.y));
        bx1 = std::max(bx1, static_cast<double>(v.x));
        by1 = std::max(by1, static_cast<double>(v.y));
    }

    LabeledImage out;
    out.image = resize_bilinear(background.frame, cw, ch);

    // Per accepted instance: what is still visible and how much is already
    // covered, so each candidate is checked against the union of everything
    // pasted after that instance.
    std::vector<CanvasMask> visible;
    std::vector<std::size_t> total, occluded;

    for (int slot = 0; slot < cfg.max_instances; ++slot) {
        bool accepted = false;
        for (int attempt = 0; attempt < cfg.max_attempts_per_paste && !accepted; ++attempt) {
            ++out.stats.attempts;

            std::size_t pick = rng.uniform_int(pool.size());
            AugmentOutcome oc;
            Cutout cut;
            try {
                cut = augment_cutout(pool[pick], aug, rng, &oc);
            } catch (const std::runtime_error&) {
                continue;  // degenerate after scaling; counts as a failed attempt
            }
            ++out.stats.augment_draws;
            out.stats.scale_applied += oc.scaled;
            out.stats.blur_applied += oc.blurred;
            out.stats.brightness_applied += oc.brightened;
            out.stats.contrast_applied += oc.contrasted;

            double cx = 0.0, cy = 0.0;
            bool inside = false;
            for (int it = 0; it < 1000 && !inside; ++it) {
                cx = rng.uniform(bx0, bx1);
                cy = rng.uniform(by0, by1);
                inside = geom::polygon_contains(poly, cx, cy);
            }
            if (!inside) continue;

            int px0 = static_cast<int>(std::lround(cx)) - cut.patch.width / 2;
            int py0 = static_cast<int>(std::lround(cy)) - cut.patch.height / 2;

            // Clip the mask at the canvas bounds.
            int mx0 = std::max(px0, 0), my0 = std::max(py0, 0);
            int mx1 = std::min(px0 + cut.patch.width, cw), my1 = std::min(py0 + cut.patch.height, ch);
            if (mx0 >= mx1 || my0 >= my1) continue;
            CanvasMask mask;
            mask.x0 = mx0;
            mask.y0 = my0;
            mask.bits = ImageU8(mx1 - mx0, my1 - my0, 0);
            for (int y = my0; y < my1; ++y)
                for (int x = mx0; x < mx1; ++x)
                    mask.bits.at(x - mx0, y - my0) = cut.alpha.at(x - px0, y - py0);
            if (mask.count() == 0) continue;

            bool ok = true;
            std::vector<std::size_t> newly(visible.size(), 0);
            for (size_t i = 0; i < visible.size() && ok; ++i) {
                newly[i] = overlap_count(visible[i], mask);
                double frac = static_cast<double>(occluded[i] + newly[i]) /
                              static_cast<double>(total[i]);
                double limit = cfg.occlusion_limit(out.instances[i].class_id);
                // Strict "< limit"; zero overlap is always admissible so a
                // zero limit still permits disjoint pastes.
                if (frac != 0.0 && !(frac < limit)) ok = false;
            }
            if (!ok) continue;

            // Composite on top, painter's order.
            for (int y = my0; y < my1; ++y)
                for (int x = mx0; x < mx1; ++x)
                    if (mask.bits.at(x - mx0, y - my0))
                        out.image.at(x, y) = cut.patch.at(x - px0, y - py0);

            for (size_t i = 0; i < visible.size(); ++i) {
                if (newly[i] == 0) continue;
                subtract_mask(visible[i], mask);
                occluded[i] += newly[i];
            }

            PasteInstance inst;
            inst.cutout_index = static_cast<int>(pick);
            inst.class_id = cut.class_id;
            inst.center_x = cx;
            inst.center_y = cy;
            inst.scale = oc.scale;
            inst.mask = mask;
            inst.order = static_cast<int>(out.instances.size());
            out.instances.push_back(std::move(inst));

            visible.push_back(out.instances.back().mask);
            total.push_back(out.instances.back().mask.count());
            occluded.push_back(0);
            accepted = true;
        }
        if (!accepted) break;  // budget cannot be met under the constraint
    }

    for (const auto& inst : out.instances)
        out.labels.push_back({inst.class_id, inst.mask.bounds()});

    out.image = swap_background(out.image, poly, bg_pool, cfg.background_swap_prob, rng,
                                &out.stats.background_swapped);
    return out;
}

std::vector<LabeledImage> synthesize_batch(const std::vector<RackBackground>& backgrounds,
                                           const std::vector<Cutout>& pool, const SynthConfig& cfg,
                                           const AugmentConfig& aug,
                                           const std::vector<ImageF>& bg_pool,
                                           std::uint64_t master_seed, int count, Exec exec) {
    cfg.validate();
    aug.validate();
    if (backgrounds.empty()) throw std::invalid_argument("synthesize_batch: no backgrounds");
    if (pool.empty()) throw std::invalid_argument("synthesize_batch: empty cutout pool");
    if (cfg.background_swap_prob > 0.0 && bg_pool.empty())
        throw std::invalid_argument("synthesize_batch: empty background pool with swap enabled");

    std::vector<LabeledImage> out(static_cast<size_t>(count));
    std::string first_error;
    parallel_for(count, exec, [&](int i) {
        try {
            Rng rng = Rng::for_stream(master_seed, static_cast<std::uint64_t>(i));
            const RackBackground& bg = backgrounds[rng.uniform_int(backgrounds.size())];
            out[static_cast<size_t>(i)] = synthesize_image(bg, pool, cfg, aug, bg_pool, rng);
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (first_error.empty()) first_error = e.what();
            }
        }
    });
    if (!first_error.empty()) throw std::runtime_error("synthesize_batch: " + first_error);
    return out;
}

}  // namespace capsynth::synth
