#pragma once

// Strip-wise busyness profiling and ROI selection.
//
// The image is cut into full-height vertical strips and full-width horizontal
// strips of `strip_px` pixels. Each strip's busyness is the number of
// connected edge components inside it. A strip is kept when its busyness is
// at least T = mean - n * stddev of its orientation's profile; only strips at
// the two ends are trimmed, so the kept strips always form one contiguous run.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "palmroi/edge.hpp"
#include "palmroi/image.hpp"

namespace palmroi {

enum class Orientation {
    horizontal_strips,  ///< full-width bands stacked top to bottom; extent = height
    vertical_strips,    ///< full-height bands left to right; extent = width
};

inline const char* to_string(Orientation o) {
    return o == Orientation::horizontal_strips ? "horizontal" : "vertical";
}

struct Strip {
    int start = 0;
    int length = 0;
    bool operator==(const Strip&) const = default;
};

struct RoiParams {
    int strip_px = 10;
    double n = 1.0;
    int edge_threshold = kDefaultEdgeThreshold;

    void validate() const {
        if (strip_px < 1) throw InvalidArgument("strip_px must be >= 1");
        if (!(n >= 0.0) || !std::isfinite(n)) throw InvalidArgument("n must be finite and >= 0");
        if (edge_threshold < 0) throw InvalidArgument("edge_threshold must be >= 0");
    }
};

/// Busyness profile of one orientation.
struct StripProfile {
    Orientation orientation = Orientation::vertical_strips;
    int strip_px = 10;
    double n = 1.0;
    std::vector<int> numlines;
    double mean = 0.0;
    double stddev = 0.0;  ///< population form
    double threshold = 0.0;
};

/// Inclusive range of kept strip indices.
struct KeepRange {
    int first = 0;
    int last = 0;

    int count() const { return last - first + 1; }
    bool operator==(const KeepRange&) const = default;
};

/// Kept ranges of one image in both orientations.
struct RoiRanges {
    KeepRange rows;  ///< horizontal-strip indices
    KeepRange cols;  ///< vertical-strip indices
    bool operator==(const RoiRanges&) const = default;
};

/// floor(extent / strip_px) contiguous strips; trailing remainder pixels belong to none.
inline std::vector<Strip> strip_partition(int extent, int strip_px) {
    if (strip_px < 1) throw InvalidArgument("strip_partition: strip_px must be >= 1");
    if (extent < strip_px) {
        throw InvalidArgument("strip_partition: extent " + std::to_string(extent) +
                              " smaller than strip width " + std::to_string(strip_px));
    }
    std::vector<Strip> strips;
    strips.reserve(static_cast<std::size_t>(extent / strip_px));
    for (int s = 0; s + strip_px <= extent; s += strip_px) strips.push_back({s, strip_px});
    return strips;
}

/// Fills mean, population stddev and T from raw per-strip counts.
inline StripProfile make_profile(Orientation orientation, int strip_px, double n, std::vector<int> numlines) {
    StripProfile p;
    p.orientation = orientation;
    p.strip_px = strip_px;
    p.n = n;
    p.numlines = std::move(numlines);
    if (p.numlines.empty()) return p;

    const double count = static_cast<double>(p.numlines.size());
    double sum = 0.0;
    for (int v : p.numlines) sum += v;
    p.mean = sum / count;
    double ss = 0.0;
    for (int v : p.numlines) ss += (v - p.mean) * (v - p.mean);
    p.stddev = std::sqrt(ss / count);
    p.threshold = p.mean - n * p.stddev;
    return p;
}

inline StripProfile strip_profile(const BinaryImage& edges, Orientation orientation, const RoiParams& params) {
    params.validate();
    const bool horizontal = orientation == Orientation::horizontal_strips;
    const int extent = horizontal ? edges.height : edges.width;
    std::vector<int> counts;
    for (const Strip& s : strip_partition(extent, params.strip_px)) {
        const RoiRect r = horizontal ? RoiRect{0, s.start, edges.width, s.length}
                                     : RoiRect{s.start, 0, s.length, edges.height};
        counts.push_back(count_connected_lines(edges, r));
    }
    return make_profile(orientation, params.strip_px, params.n, std::move(counts));
}

inline StripProfile strip_profile(const GrayImage& img, Orientation orientation, const RoiParams& params) {
    params.validate();
    return strip_profile(edge_mask(img, params.edge_threshold), orientation, params);
}

/**
 * @brief Whether strip `i` reaches the profile threshold.
 *
 * Evaluates numlines[i] >= mean - n * stddev without rounding: with N strips,
 * S = sum and Q = sum of squares, the test is N*x - S >= -n * sqrt(N*Q - S^2).
 * Both N*x - S and N*Q - S^2 are exact integers that do not change when every
 * count is shifted by a constant, so shifted or scaled profiles keep the same
 * strips even when a count sits exactly on the threshold.
 */
inline bool strip_kept(const StripProfile& p, std::size_t i) {
    const auto N = static_cast<__int128>(p.numlines.size());
    __int128 S = 0;
    __int128 Q = 0;
    for (int v : p.numlines) {
        S += v;
        Q += static_cast<__int128>(v) * v;
    }
    const __int128 d = N * p.numlines.at(i) - S;
    const __int128 D = N * Q - S * S;
    if (p.n >= 0.0) {
        if (d >= 0) return true;
        const __int128 d2 = d * d;
        const double n_int = std::nearbyint(p.n);
        if (n_int == p.n && n_int < 1e6) {
            const auto nn = static_cast<__int128>(n_int);
            return nn * nn * D >= d2;
        }
        return static_cast<long double>(p.n) * p.n * static_cast<long double>(D) >= static_cast<long double>(d2);
    }
    // Negative multipliers put T above the mean: keep iff d >= |n| * sqrt(D).
    if (d < 0) return false;
    const long double m = -static_cast<long double>(p.n);
    return static_cast<long double>(d) * static_cast<long double>(d) >= m * m * static_cast<long double>(D);
}

namespace detail {

template <typename Kept>
KeepRange trim_ends(int count, Orientation orientation, Kept kept) {
    if (count == 0) throw InvalidArgument("trim_strips: empty profile");
    int first = 0;
    while (first < count && !kept(first)) ++first;
    if (first == count) {
        throw EmptyRoiError(std::string("empty ROI: every ") + to_string(orientation) +
                            " strip is below the threshold");
    }
    int last = count - 1;
    while (!kept(last)) --last;
    return {first, last};
}

}  // namespace detail

/// Drops sub-threshold strips from both ends; interior dips stay.
inline KeepRange trim_strips(const StripProfile& profile) {
    return detail::trim_ends(static_cast<int>(profile.numlines.size()), profile.orientation,
                             [&](int i) { return strip_kept(profile, static_cast<std::size_t>(i)); });
}

/// Same trimming rule against an explicit threshold: strip i is kept iff numlines[i] >= threshold.
inline KeepRange trim_strips(std::span<const int> numlines, double threshold,
                             Orientation orientation = Orientation::vertical_strips) {
    return detail::trim_ends(static_cast<int>(numlines.size()), orientation,
                             [&](int i) { return numlines[static_cast<std::size_t>(i)] >= threshold; });
}

inline RoiRect ranges_to_rect(const RoiRanges& r, int strip_px) {
    return {r.cols.first * strip_px, r.rows.first * strip_px, r.cols.count() * strip_px,
            r.rows.count() * strip_px};
}

inline RoiRanges roi_ranges(const GrayImage& img, const RoiParams& params) {
    params.validate();
    const BinaryImage edges = edge_mask(img, params.edge_threshold);
    return {trim_strips(strip_profile(edges, Orientation::horizontal_strips, params)),
            trim_strips(strip_profile(edges, Orientation::vertical_strips, params))};
}

/// ROI of a single image: kept rows intersected with kept columns.
inline RoiRect extract_roi(const GrayImage& img, const RoiParams& params) {
    return ranges_to_rect(roi_ranges(img, params), params.strip_px);
}

namespace detail {

// Most frequent value; ties resolved by `prefer(a, b)` returning true when a wins.
template <typename Prefer>
int mode_of(std::span<const RoiRanges> all, int (*pick)(const RoiRanges&), Prefer prefer) {
    std::map<int, int> freq;
    for (const RoiRanges& r : all) ++freq[pick(r)];
    int best = freq.begin()->first;
    int best_count = 0;
    for (const auto& [value, count] : freq) {
        if (count > best_count || (count == best_count && prefer(value, best))) {
            best = value;
            best_count = count;
        }
    }
    return best;
}

}  // namespace detail

/**
 * @brief Corpus-wide ROI from per-image kept ranges.
 *
 * Each of the four boundaries is the most frequent value of that boundary
 * across images. Ties favour the larger ROI: the smaller first index and the
 * larger last index.
 */
inline RoiRect common_roi(std::span<const RoiRanges> rois, int strip_px) {
    if (rois.empty()) throw InvalidArgument("common_roi: no images");
    if (strip_px < 1) throw InvalidArgument("common_roi: strip_px must be >= 1");
    auto lower = [](int a, int b) { return a < b; };
    auto higher = [](int a, int b) { return a > b; };
    RoiRanges out;
    out.rows.first = detail::mode_of(rois, [](const RoiRanges& r) { return r.rows.first; }, lower);
    out.rows.last = detail::mode_of(rois, [](const RoiRanges& r) { return r.rows.last; }, higher);
    out.cols.first = detail::mode_of(rois, [](const RoiRanges& r) { return r.cols.first; }, lower);
    out.cols.last = detail::mode_of(rois, [](const RoiRanges& r) { return r.cols.last; }, higher);
    if (out.rows.first > out.rows.last || out.cols.first > out.cols.last) {
        throw EmptyRoiError("empty ROI: most frequent boundaries cross");
    }
    return ranges_to_rect(out, strip_px);
}

}  // namespace palmroi
