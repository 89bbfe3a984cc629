#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace capsynth {

template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<size_t>(w) * static_cast<size_t>(h), fill) {}

    T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return data.size(); }
};

using ImageF = Image<float>;
using ImageU8 = Image<std::uint8_t>;
using ImageU16 = Image<std::uint16_t>;

inline std::uint8_t float_to_u8(float v) {
    float c = std::clamp(v, 0.0f, 1.0f);
    return static_cast<std::uint8_t>(c * 255.0f + 0.5f);
}

inline float u8_to_float(std::uint8_t v) { return static_cast<float>(v) / 255.0f; }

inline ImageU8 to_u8(const ImageF& img) {
    ImageU8 out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) out.data[i] = float_to_u8(img.data[i]);
    return out;
}

inline ImageF to_float(const ImageU8& img) {
    ImageF out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) out.data[i] = u8_to_float(img.data[i]);
    return out;
}

inline ImageF resize_bilinear(const ImageF& src, int w, int h) {
    if (src.width == w && src.height == h) return src;
    ImageF out(w, h);
    for (int y = 0; y < h; ++y) {
        double sy = (y + 0.5) * src.height / h - 0.5;
        int y0 = static_cast<int>(std::floor(sy));
        double fy = sy - y0;
        int y1 = std::min(y0 + 1, src.height - 1);
        y0 = std::max(y0, 0);
        for (int x = 0; x < w; ++x) {
            double sx = (x + 0.5) * src.width / w - 0.5;
            int x0 = static_cast<int>(std::floor(sx));
            double fx = sx - x0;
            int x1 = std::min(x0 + 1, src.width - 1);
            x0 = std::max(x0, 0);
            double top = src.at(x0, y0) * (1.0 - fx) + src.at(x1, y0) * fx;
            double bot = src.at(x0, y1) * (1.0 - fx) + src.at(x1, y1) * fx;
            out.at(x, y) = static_cast<float>(top * (1.0 - fy) + bot * fy);
        }
    }
    return out;
}

}  // namespace capsynth
