#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "speckle/common.hpp"

namespace speckle {

/// 8-bit grey-value frame, row-major.
class SpeckleImage {
public:
    SpeckleImage() = default;
    SpeckleImage(Dims dims, uint8_t fill = 0)
        : dims_(dims), grey_(static_cast<size_t>(dims.pixels()), fill) {
        if (!dims.positive()) throw InvalidArgument("image: dims must be positive");
    }

    Dims dims() const { return dims_; }
    int width() const { return dims_.width; }
    int height() const { return dims_.height; }
    size_t pixels() const { return grey_.size(); }

    uint8_t at(int x, int y) const { return grey_[static_cast<size_t>(y) * dims_.width + x]; }
    uint8_t& at(int x, int y) { return grey_[static_cast<size_t>(y) * dims_.width + x]; }

    const std::vector<uint8_t>& data() const { return grey_; }
    std::vector<uint8_t>& data() { return grey_; }

    bool operator==(const SpeckleImage&) const = default;

private:
    Dims dims_;
    std::vector<uint8_t> grey_;
};

/// Binary PGM (P5, maxval 255).
void write_pgm(const SpeckleImage& img, const std::filesystem::path& path);
SpeckleImage read_pgm(const std::filesystem::path& path);

}  // namespace speckle
