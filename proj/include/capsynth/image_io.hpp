#pragma once

#include <string>
#include <vector>

#include "capsynth/image.hpp"

namespace capsynth {

void write_png_gray8(const std::string& path, const ImageU8& img);
void write_png_gray16(const std::string& path, const ImageU16& img);

/// Interleaved RGBA, row-major, 4 bytes per pixel.
void write_png_rgba(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& rgba);

ImageU8 read_png_gray8(const std::string& path);
ImageU16 read_png_gray16(const std::string& path);

/// Any PNG, converted to single-channel float in [0,1] (BT.601 luma for
/// color inputs; alpha ignored).
ImageF read_png_gray_f(const std::string& path);

/// Interleaved RGBA regardless of the stored format.
void read_png_rgba(const std::string& path, int& width, int& height,
                   std::vector<std::uint8_t>& rgba);

/// Header-only probe.
void png_dimensions(const std::string& path, int& width, int& height);

}  // namespace capsynth
