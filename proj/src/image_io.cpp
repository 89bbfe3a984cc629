#include "capsynth/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

namespace capsynth {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open " + path);
    return f;
}

void write_png(const std::string& path, int width, int height, int bit_depth, int color_type,
               const std::vector<png_bytep>& rows) {
    FilePtr fp = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png write error: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);  // in-memory values are host (little) endian
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FilePtr fp;

    explicit PngReader(const std::string& path) : fp(open_file(path, "rb")) {
        png_byte header[8];
        if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
            throw std::runtime_error("not a PNG file: " + path);
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (!png) throw std::runtime_error("png_create_read_struct failed");
        info = png_create_info_struct(png);
        if (!info) {
            png_destroy_read_struct(&png, nullptr, nullptr);
            throw std::runtime_error("png_create_info_struct failed");
        }
        if (setjmp(png_jmpbuf(png))) {
            png_destroy_read_struct(&png, &info, nullptr);
            png = nullptr;
            throw std::runtime_error("png read error: " + path);
        }
        png_init_io(png, fp.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);
    }

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
    }
};

}  // namespace

void write_png_gray8(const std::string& path, const ImageU8& img) {
    std::vector<png_bytep> rows(static_cast<size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[static_cast<size_t>(y)] =
            const_cast<png_bytep>(img.data.data() + static_cast<size_t>(y) * img.width);
    write_png(path, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png_gray16(const std::string& path, const ImageU16& img) {
    std::vector<png_bytep> rows(static_cast<size_t>(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[static_cast<size_t>(y)] = const_cast<png_bytep>(
            reinterpret_cast<const png_byte*>(img.data.data() + static_cast<size_t>(y) * img.width));
    write_png(path, img.width, img.height, 16, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png_rgba(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& rgba) {
    if (rgba.size() != static_cast<size_t>(width) * height * 4)
        throw std::invalid_argument("write_png_rgba: buffer size mismatch");
    std::vector<png_bytep> rows(static_cast<size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[static_cast<size_t>(y)] =
            const_cast<png_bytep>(rgba.data() + static_cast<size_t>(y) * width * 4);
    write_png(path, width, height, 8, PNG_COLOR_TYPE_RGBA, rows);
}

void read_png_rgba(const std::string& path, int& width, int& height,
                   std::vector<std::uint8_t>& rgba) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) throw std::runtime_error("png read error: " + path);

    // Normalize every input to 8-bit RGBA.
    png_set_expand(r.png);
    png_set_strip_16(r.png);
    png_set_gray_to_rgb(r.png);
    png_set_add_alpha(r.png, 0xFF, PNG_FILLER_AFTER);
    png_read_update_info(r.png, r.info);

    width = static_cast<int>(png_get_image_width(r.png, r.info));
    height = static_cast<int>(png_get_image_height(r.png, r.info));
    rgba.assign(static_cast<size_t>(width) * height * 4, 0);
    std::vector<png_bytep> rows(static_cast<size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[static_cast<size_t>(y)] = rgba.data() + static_cast<size_t>(y) * width * 4;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
}

void png_dimensions(const std::string& path, int& width, int& height) {
    PngReader r(path);
    width = static_cast<int>(png_get_image_width(r.png, r.info));
    height = static_cast<int>(png_get_image_height(r.png, r.info));
}

ImageU8 read_png_gray8(const std::string& path) {
    int w = 0, h = 0;
    std::vector<std::uint8_t> rgba;
    read_png_rgba(path, w, h, rgba);
    ImageU8 out(w, h);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = rgba[i * 4];
    return out;
}

ImageU16 read_png_gray16(const std::string& path) {
    PngReader r(path);
    if (setjmp(png_jmpbuf(r.png))) throw std::runtime_error("png read error: " + path);

    int color_type = png_get_color_type(r.png, r.info);
    int bit_depth = png_get_bit_depth(r.png, r.info);
    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 16)
        throw std::runtime_error("expected 16-bit gray PNG: " + path);
    png_set_swap(r.png);
    png_read_update_info(r.png, r.info);

    int w = static_cast<int>(png_get_image_width(r.png, r.info));
    int h = static_cast<int>(png_get_image_height(r.png, r.info));
    ImageU16 out(w, h);
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int y = 0; y < h; ++y)
        rows[static_cast<size_t>(y)] =
            reinterpret_cast<png_byte*>(out.data.data() + static_cast<size_t>(y) * w);
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return out;
}

ImageF read_png_gray_f(const std::string& path) {
    int w = 0, h = 0;
    std::vector<std::uint8_t> rgba;
    read_png_rgba(path, w, h, rgba);
    ImageF out(w, h);
    for (size_t i = 0; i < out.data.size(); ++i) {
        float r = rgba[i * 4 + 0] / 255.0f;
        float g = rgba[i * 4 + 1] / 255.0f;
        float b = rgba[i * 4 + 2] / 255.0f;
        out.data[i] = 0.299f * r + 0.587f * g + 0.114f * b;
    }
    return out;
}

}  // namespace capsynth
