#pragma once

// Sub-region texture features: the ROI is tiled into a grid and each cell's
// busyness (connected edge components) is normalized by the busiest cell.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "palmroi/edge.hpp"
#include "palmroi/image.hpp"

namespace palmroi {

/// Normalized feature values, each in [0, 1].
class FeatureVector {
public:
    FeatureVector() = default;
    explicit FeatureVector(std::vector<double> values) : values_(std::move(values)) {
        for (double v : values_) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw InvalidArgument("feature value " + std::to_string(v) + " outside [0, 1]");
            }
        }
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }
    operator std::span<const double>() const { return values_; }

    bool operator==(const FeatureVector&) const = default;

private:
    std::vector<double> values_;
};

struct GridShape {
    int rows = 0;
    int cols = 0;
};

inline bool is_supported_k(int k) { return k == 4 || k == 8 || k == 16; }

/// 4 -> 2x2, 8 -> 2 rows x 4 columns, 16 -> 4x4.
inline GridShape grid_shape(int k) {
    switch (k) {
        case 4: return {2, 2};
        case 8: return {2, 4};
        case 16: return {4, 4};
        default: throw InvalidArgument("feature size must be 4, 8 or 16, got " + std::to_string(k));
    }
}

/// Row-major tiling of `rect`; the last row and column absorb division remainders.
inline std::vector<RoiRect> subregion_grid(const RoiRect& rect, int k) {
    const GridShape g = grid_shape(k);
    if (rect.width < g.cols || rect.height < g.rows) {
        throw InvalidArgument("rect " + std::to_string(rect.width) + "x" + std::to_string(rect.height) +
                              " too small for a " + std::to_string(g.rows) + "x" + std::to_string(g.cols) +
                              " grid");
    }
    const int cw = rect.width / g.cols;
    const int ch = rect.height / g.rows;
    std::vector<RoiRect> cells;
    cells.reserve(static_cast<std::size_t>(k));
    for (int r = 0; r < g.rows; ++r) {
        const int h = r == g.rows - 1 ? rect.height - ch * (g.rows - 1) : ch;
        for (int c = 0; c < g.cols; ++c) {
            const int w = c == g.cols - 1 ? rect.width - cw * (g.cols - 1) : cw;
            cells.push_back({rect.x0 + c * cw, rect.y0 + r * ch, w, h});
        }
    }
    return cells;
}

/// Unnormalized per-cell component counts.
inline std::vector<int> raw_features(const BinaryImage& edges, const RoiRect& rect, int k) {
    std::vector<int> raw;
    for (const RoiRect& cell : subregion_grid(rect, k)) raw.push_back(count_connected_lines(edges, cell));
    return raw;
}

/// Scales counts by the largest one; an all-zero input stays all zero.
inline FeatureVector normalize_counts(std::span<const int> raw) {
    const int peak = raw.empty() ? 0 : *std::max_element(raw.begin(), raw.end());
    std::vector<double> values(raw.size(), 0.0);
    if (peak > 0) {
        for (std::size_t i = 0; i < raw.size(); ++i) values[i] = static_cast<double>(raw[i]) / peak;
    }
    return FeatureVector(std::move(values));
}

inline FeatureVector extract_features(const BinaryImage& edges, const RoiRect& rect, int k) {
    if (!rect_within(rect, edges.width, edges.height)) {
        throw InvalidArgument("extract_features: rect (" + to_string(rect) + ") outside image");
    }
    const auto raw = raw_features(edges, rect, k);
    return normalize_counts(raw);
}

inline FeatureVector extract_features(const GrayImage& img, const RoiRect& rect, int k, int edge_threshold) {
    grid_shape(k);
    return extract_features(edge_mask(img, edge_threshold), rect, k);
}

/// Comma-separated, six fractional digits.
inline std::string format_features(const FeatureVector& f) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f", f[i]);
        if (i) out += ',';
        out += buf;
    }
    return out;
}

/// Comma-separated, shortest text that reads back to the same doubles.
inline std::string format_features_exact(const FeatureVector& f) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto res = std::to_chars(buf, buf + sizeof buf, f[i]);
        if (i) out += ',';
        out.append(buf, res.ptr);
    }
    return out;
}

inline FeatureVector parse_features(std::string_view text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view field = text.substr(pos, comma - pos);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || end != field.data() + field.size() || field.empty()) {
            throw ParseError("bad feature value '" + std::string(field) + "'");
        }
        values.push_back(v);
        pos = comma + 1;
    }
    try {
        return FeatureVector(std::move(values));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

}  // namespace palmroi
