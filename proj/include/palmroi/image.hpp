#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "palmroi/error.hpp"

namespace palmroi {

/// Axis-aligned rectangle, top-left corner inclusive.
struct RoiRect {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;

    int x1() const { return x0 + width; }   ///< one past the last column
    int y1() const { return y0 + height; }  ///< one past the last row

    bool operator==(const RoiRect&) const = default;
};

inline std::string to_string(const RoiRect& r) {
    return std::to_string(r.x0) + " " + std::to_string(r.y0) + " " + std::to_string(r.width) + " " +
           std::to_string(r.height);
}

/// True when `r` is non-empty and lies entirely inside a `width` x `height` frame.
inline bool rect_within(const RoiRect& r, int width, int height) {
    return r.x0 >= 0 && r.y0 >= 0 && r.width > 0 && r.height > 0 && r.x1() <= width &&
           r.y1() <= height;
}

/**
 * @brief 8-bit single-channel raster stored row-major.
 *
 * pixel(x, y) lives at index y * width + x. Dimensions are always positive and
 * the pixel buffer always holds exactly width * height values.
 */
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, std::uint8_t fill = 0) : width_(width), height_(height) {
        check_dims(width, height);
        pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        check_dims(width, height);
        if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw InvalidArgument("pixel buffer size " + std::to_string(pixels_.size()) +
                                  " does not match " + std::to_string(width) + "x" +
                                  std::to_string(height));
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }
    RoiRect frame() const { return {0, 0, width_, height_}; }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    static void check_dims(int width, int height) {
        if (width <= 0 || height <= 0) {
            throw InvalidArgument("image dimensions must be positive, got " +
                                  std::to_string(width) + "x" + std::to_string(height));
        }
    }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Copy of the pixels under `rect`; result(i, j) = img(x0 + i, y0 + j).
inline GrayImage crop(const GrayImage& img, const RoiRect& rect) {
    if (!rect_within(rect, img.width(), img.height())) {
        throw InvalidArgument("crop rect (" + to_string(rect) + ") outside " +
                              std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                              " image");
    }
    GrayImage out(rect.width, rect.height);
    for (int j = 0; j < rect.height; ++j) {
        for (int i = 0; i < rect.width; ++i) {
            out.at(i, j) = img.at(rect.x0 + i, rect.y0 + j);
        }
    }
    return out;
}

}  // namespace palmroi
