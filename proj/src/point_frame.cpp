#include "capsynth/point_frame.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "capsynth/image.hpp"
#include "capsynth/image_io.hpp"

namespace capsynth::sensor {

namespace {

constexpr char kMagic[4] = {'C', 'S', 'P', 'F'};

void put_u32(std::ostream& os, std::uint32_t v) {
    // little-endian
    char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                 static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

std::size_t PointFrame::valid_count() const {
    std::size_t n = 0;
    for (auto v : valid) n += v != 0;
    return n;
}

void save_point_frame(const std::string& dir, const std::string& stem, const PointFrame& frame) {
    const std::string base = dir + "/" + stem;

    ImageU8 gray8(frame.width, frame.height);
    for (size_t i = 0; i < frame.gray.size(); ++i) gray8.data[i] = float_to_u8(frame.gray[i]);
    write_png_gray8(base + ".gray.png", gray8);

    ImageU16 ids16(frame.width, frame.height);
    for (size_t i = 0; i < frame.ids.size(); ++i) {
        if (!frame.valid[i]) {
            ids16.data[i] = 0;
            continue;
        }
        std::int32_t id = frame.ids[i];
        if (id < 0 || id > 65534) throw std::runtime_error("instance id out of range for ids PNG");
        ids16.data[i] = static_cast<std::uint16_t>(id + 1);
    }
    write_png_gray16(base + ".ids.png", ids16);

    std::ofstream os(base + ".points.bin", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + base + ".points.bin");
    os.write(kMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(frame.width));
    put_u32(os, static_cast<std::uint32_t>(frame.height));
    put_u32(os, 0);
    const float nanf = std::numeric_limits<float>::quiet_NaN();
    std::vector<float> row(static_cast<size_t>(frame.width) * 3);
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            size_t i = frame.idx(x, y);
            if (frame.valid[i]) {
                row[static_cast<size_t>(x) * 3 + 0] = static_cast<float>(frame.points[i].x);
                row[static_cast<size_t>(x) * 3 + 1] = static_cast<float>(frame.points[i].y);
                row[static_cast<size_t>(x) * 3 + 2] = static_cast<float>(frame.points[i].z);
            } else {
                row[static_cast<size_t>(x) * 3 + 0] = nanf;
                row[static_cast<size_t>(x) * 3 + 1] = nanf;
                row[static_cast<size_t>(x) * 3 + 2] = nanf;
            }
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
}

PointFrame load_point_frame(const std::string& dir, const std::string& stem) {
    const std::string base = dir + "/" + stem;

    ImageU8 gray8 = read_png_gray8(base + ".gray.png");
    ImageU16 ids16 = read_png_gray16(base + ".ids.png");
    if (ids16.width != gray8.width || ids16.height != gray8.height)
        throw std::runtime_error("gray/ids size mismatch for " + base);

    std::ifstream is(base + ".points.bin", std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + base + ".points.bin");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad magic in " + base + ".points.bin");
    int w = static_cast<int>(get_u32(is));
    int h = static_cast<int>(get_u32(is));
    get_u32(is);  // reserved
    if (w != gray8.width || h != gray8.height)
        throw std::runtime_error("points grid size mismatch for " + base);

    PointFrame frame(w, h);
    for (size_t i = 0; i < frame.gray.size(); ++i) frame.gray[i] = u8_to_float(gray8.data[i]);

    std::vector<float> row(static_cast<size_t>(w) * 3);
    for (int y = 0; y < h; ++y) {
        is.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!is) throw std::runtime_error("truncated points file " + base);
        for (int x = 0; x < w; ++x) {
            size_t i = frame.idx(x, y);
            float px = row[static_cast<size_t>(x) * 3 + 0];
            float py = row[static_cast<size_t>(x) * 3 + 1];
            float pz = row[static_cast<size_t>(x) * 3 + 2];
            std::uint16_t id = ids16.data[i];
            bool has_point = !std::isnan(px);
            if (has_point != (id != 0))
                throw std::runtime_error("point/id channel disagreement in " + base);
            if (has_point) {
                frame.valid[i] = 1;
                frame.points[i] = {px, py, pz};
                frame.ids[i] = static_cast<std::int32_t>(id) - 1;
            }
        }
    }
    return frame;
}

}  // namespace capsynth::sensor
