#pragma once

// Sobel gradients, edge binarization and 8-connected component counting.
// The component count of an edge mask over a region is the "busyness" measure
// shared by ROI trimming and texture features.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "palmroi/image.hpp"

namespace palmroi {

/// Default edge threshold on the L1 Sobel scale (0..2040).
inline constexpr int kDefaultEdgeThreshold = 96;

/// Per-pixel L1 Sobel magnitude |Gx| + |Gy|. The one-pixel border is zero.
struct GradientImage {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> magnitudes;

    std::int32_t at(int x, int y) const {
        return magnitudes[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                          static_cast<std::size_t>(x)];
    }
};

/// Row-major edge mask; a nonzero byte marks an edge pixel.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryImage() = default;
    BinaryImage(int w, int h, bool fill = false)
        : width(w), height(h),
          bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill ? 1 : 0) {}

    bool at(int x, int y) const { return bits[index(x, y)] != 0; }
    void set(int x, int y, bool v) { bits[index(x, y)] = v ? 1 : 0; }

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
    }
};

inline GradientImage sobel_magnitude(const GrayImage& img) {
    if (img.width() < 3 || img.height() < 3) {
        throw InvalidArgument("sobel_magnitude needs at least 3x3 pixels, got " +
                              std::to_string(img.width()) + "x" + std::to_string(img.height()));
    }
    const int w = img.width();
    const int h = img.height();
    GradientImage g{w, h, std::vector<std::int32_t>(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0)};
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const int nw = img.at(x - 1, y - 1), n = img.at(x, y - 1), ne = img.at(x + 1, y - 1);
            const int west = img.at(x - 1, y), east = img.at(x + 1, y);
            const int sw = img.at(x - 1, y + 1), s = img.at(x, y + 1), se = img.at(x + 1, y + 1);
            const int gx = (ne + 2 * east + se) - (nw + 2 * west + sw);
            const int gy = (sw + 2 * s + se) - (nw + 2 * n + ne);
            g.magnitudes[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] =
                std::abs(gx) + std::abs(gy);
        }
    }
    return g;
}

/// Edge pixel iff magnitude >= threshold.
inline BinaryImage binarize(const GradientImage& grad, int threshold) {
    if (threshold < 0) throw InvalidArgument("binarize: negative threshold");
    BinaryImage b(grad.width, grad.height);
    for (std::size_t i = 0; i < grad.magnitudes.size(); ++i) {
        b.bits[i] = grad.magnitudes[i] >= threshold ? 1 : 0;
    }
    return b;
}

inline BinaryImage edge_mask(const GrayImage& img, int edge_threshold) {
    return binarize(sobel_magnitude(img), edge_threshold);
}

/**
 * @brief Number of 8-connected components of edge pixels inside `rect`.
 *
 * Pixels outside the rect are treated as background, so a line crossing the
 * rect border is cut there. Single-pass union-find labeling.
 */
inline int count_connected_lines(const BinaryImage& bin, const RoiRect& rect) {
    if (!rect_within(rect, bin.width, bin.height)) {
        throw InvalidArgument("count_connected_lines: rect (" + to_string(rect) + ") outside mask");
    }
    const int w = rect.width;
    const int h = rect.height;
    std::vector<int> parent(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);

    auto find = [&parent](int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    int components = 0;
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) std::swap(a, b);
        parent[a] = b;
        --components;
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bin.at(rect.x0 + x, rect.y0 + y)) continue;
            const int i = y * w + x;
            parent[i] = i;
            ++components;
            // Already-visited neighbours: W, NW, N, NE.
            if (x > 0 && parent[i - 1] >= 0) unite(i, i - 1);
            if (y > 0) {
                const int up = i - w;
                if (x > 0 && parent[up - 1] >= 0) unite(i, up - 1);
                if (parent[up] >= 0) unite(i, up);
                if (x + 1 < w && parent[up + 1] >= 0) unite(i, up + 1);
            }
        }
    }
    return components;
}

/// Component count of the edge map of `img` restricted to `rect`.
/// Gradients come from the whole image so the rect border sees true neighbours.
inline int busyness(const GrayImage& img, const RoiRect& rect, int edge_threshold) {
    if (!rect_within(rect, img.width(), img.height())) {
        throw InvalidArgument("busyness: rect (" + to_string(rect) + ") outside image");
    }
    return count_connected_lines(edge_mask(img, edge_threshold), rect);
}

}  // namespace palmroi
