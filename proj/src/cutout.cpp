#include "capsynth/cutout.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "capsynth/image_io.hpp"

namespace capsynth::seg {

namespace {

std::string sidecar_path(const std::string& png_path) {
    auto dot = png_path.rfind('.');
    return (dot == std::string::npos ? png_path : png_path.substr(0, dot)) + ".json";
}

}  // namespace

std::size_t Cutout::alpha_count() const {
    std::size_t n = 0;
    for (auto a : alpha.data) n += a != 0;
    return n;
}

void Cutout::validate() const {
    if (patch.width != alpha.width || patch.height != alpha.height)
        throw std::runtime_error("cutout patch/alpha size mismatch");
    if (alpha_count() == 0) throw std::runtime_error("cutout alpha mask is empty");
    if (anchor.width() != patch.width || anchor.height() != patch.height)
        throw std::runtime_error("cutout anchor does not match patch size");

    auto row_has_alpha = [&](int y) {
        for (int x = 0; x < alpha.width; ++x)
            if (alpha.at(x, y)) return true;
        return false;
    };
    auto col_has_alpha = [&](int x) {
        for (int y = 0; y < alpha.height; ++y)
            if (alpha.at(x, y)) return true;
        return false;
    };
    if (!row_has_alpha(0) || !row_has_alpha(alpha.height - 1) || !col_has_alpha(0) ||
        !col_has_alpha(alpha.width - 1))
        throw std::runtime_error("cutout alpha bounds are not tight");
}

void save_cutout(const std::string& png_path, const Cutout& cutout) {
    cutout.validate();
    const int w = cutout.patch.width, h = cutout.patch.height;
    std::vector<std::uint8_t> rgba(static_cast<size_t>(w) * h * 4);
    for (size_t i = 0; i < cutout.patch.data.size(); ++i) {
        std::uint8_t g = float_to_u8(cutout.patch.data[i]);
        rgba[i * 4 + 0] = g;
        rgba[i * 4 + 1] = g;
        rgba[i * 4 + 2] = g;
        rgba[i * 4 + 3] = cutout.alpha.data[i] ? 255 : 0;
    }
    write_png_rgba(png_path, w, h, rgba);

    nlohmann::json meta;
    meta["class_id"] = cutout.class_id;
    meta["pose_id"] = cutout.pose_id;
    meta["frame_id"] = cutout.frame_id;
    meta["anchor"] = {cutout.anchor.x0, cutout.anchor.y0, cutout.anchor.x1, cutout.anchor.y1};
    std::ofstream os(sidecar_path(png_path));
    if (!os) throw std::runtime_error("cannot write " + sidecar_path(png_path));
    os << meta.dump(2) << "\n";
}

Cutout load_cutout(const std::string& png_path) {
    int w = 0, h = 0;
    std::vector<std::uint8_t> rgba;
    read_png_rgba(png_path, w, h, rgba);

    Cutout c;
    c.patch = ImageF(w, h);
    c.alpha = ImageU8(w, h);
    for (size_t i = 0; i < c.patch.data.size(); ++i) {
        c.patch.data[i] = u8_to_float(rgba[i * 4]);
        c.alpha.data[i] = rgba[i * 4 + 3] >= 128 ? 1 : 0;
    }

    std::ifstream is(sidecar_path(png_path));
    if (!is) throw std::runtime_error("missing cutout sidecar " + sidecar_path(png_path));
    nlohmann::json meta = nlohmann::json::parse(is);
    c.class_id = meta.at("class_id").get<int>();
    c.pose_id = meta.value("pose_id", -1);
    c.frame_id = meta.value("frame_id", -1);
    auto a = meta.at("anchor");
    c.anchor = {a.at(0).get<int>(), a.at(1).get<int>(), a.at(2).get<int>(), a.at(3).get<int>()};
    c.validate();
    return c;
}

}  // namespace capsynth::seg
