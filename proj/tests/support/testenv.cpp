#include "support/testenv.hpp"

#include "capsynth/image_io.hpp"

namespace testenv {

void write_background_pool(const std::string& dir, int count, int size) {
    std::filesystem::create_directories(dir);
    for (int k = 0; k < count; ++k) {
        capsynth::ImageU8 img(size, size);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x)
                img.at(x, y) = static_cast<std::uint8_t>((x * (k + 3) + y * (k + 1)) % 251);
        capsynth::write_png_gray8(dir + "/bg_" + std::to_string(k) + ".png", img);
    }
}

}  // namespace testenv
