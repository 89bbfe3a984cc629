#include "capsynth/yolo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace capsynth::data {

namespace {
constexpr double kBoxEps = 1e-6;
}

void Label::validate() const {
    if (class_id < 0) throw std::invalid_argument("label class id must be >= 0");
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("label box must have positive size");
    if (cx - w / 2 < -kBoxEps || cx + w / 2 > 1.0 + kBoxEps || cy - h / 2 < -kBoxEps ||
        cy + h / 2 > 1.0 + kBoxEps)
        throw std::invalid_argument("label box outside the unit square");
}

std::string emit_yolo(const std::vector<Label>& labels) {
    std::string out;
    char buf[160];
    for (const auto& l : labels) {
        l.validate();
        std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", l.class_id, l.cx, l.cy, l.w,
                      l.h);
        out += buf;
    }
    return out;
}

std::vector<Label> parse_yolo(const std::string& text) {
    std::vector<Label> labels;
    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (tokens.size() != 5)
            throw std::runtime_error("yolo label line " + std::to_string(lineno) +
                                     ": expected 5 fields, got " + std::to_string(tokens.size()));
        try {
            Label l;
            size_t used = 0;
            l.class_id = std::stoi(tokens[0], &used);
            if (used != tokens[0].size()) throw std::invalid_argument("trailing characters");
            l.cx = std::stod(tokens[1]);
            l.cy = std::stod(tokens[2]);
            l.w = std::stod(tokens[3]);
            l.h = std::stod(tokens[4]);
            l.validate();
            labels.push_back(l);
        } catch (const std::exception& e) {
            throw std::runtime_error("yolo label line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return labels;
}

Label label_from_pixel_box(const seg::PixelBox& box, int image_w, int image_h, int class_id,
                           bool* clamped) {
    if (box.x1 < box.x0 || box.y1 < box.y0)
        throw std::invalid_argument("label_from_pixel_box: inverted box");

    // Pixel i covers [i, i+1) in continuous coordinates.
    double x0 = box.x0, x1 = box.x1 + 1.0;
    double y0 = box.y0, y1 = box.y1 + 1.0;
    double cx0 = std::clamp(x0, 0.0, static_cast<double>(image_w));
    double cx1 = std::clamp(x1, 0.0, static_cast<double>(image_w));
    double cy0 = std::clamp(y0, 0.0, static_cast<double>(image_h));
    double cy1 = std::clamp(y1, 0.0, static_cast<double>(image_h));
    if (clamped) *clamped = (cx0 != x0 || cx1 != x1 || cy0 != y0 || cy1 != y1);
    if (cx0 >= cx1 || cy0 >= cy1)
        throw std::invalid_argument("label_from_pixel_box: box entirely outside the image");

    Label l;
    l.class_id = class_id;
    l.cx = (cx0 + cx1) / 2.0 / image_w;
    l.cy = (cy0 + cy1) / 2.0 / image_h;
    l.w = (cx1 - cx0) / image_w;
    l.h = (cy1 - cy0) / image_h;
    l.validate();
    return l;
}

seg::PixelBox pixel_box_from_label(const Label& label, int image_w, int image_h) {
    double x0 = (label.cx - label.w / 2.0) * image_w;
    double x1 = (label.cx + label.w / 2.0) * image_w;
    double y0 = (label.cy - label.h / 2.0) * image_h;
    double y1 = (label.cy + label.h / 2.0) * image_h;
    seg::PixelBox box;
    box.x0 = static_cast<int>(std::lround(x0));
    box.y0 = static_cast<int>(std::lround(y0));
    box.x1 = static_cast<int>(std::lround(x1)) - 1;
    box.y1 = static_cast<int>(std::lround(y1)) - 1;
    return box;
}

}  // namespace capsynth::data
