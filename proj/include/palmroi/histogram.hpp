#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>

#include "palmroi/image.hpp"

namespace palmroi {

inline constexpr int kDefaultModalityWindow = 9;

/// Intensity histogram, one bin per gray level.
struct Histogram {
    std::array<std::uint64_t, 256> bins{};

    std::uint64_t total() const {
        return std::accumulate(bins.begin(), bins.end(), std::uint64_t{0});
    }
    bool operator==(const Histogram&) const = default;
};

inline Histogram histogram(const GrayImage& img) {
    Histogram h;
    for (std::uint8_t v : img.pixels()) ++h.bins[v];
    return h;
}

/// Intensity with the largest count; ties go to the lowest intensity.
inline int histogram_peak(const Histogram& h) {
    int best = -1;
    std::uint64_t best_count = 0;
    for (int v = 0; v < 256; ++v) {
        if (h.bins[v] > best_count) {
            best = v;
            best_count = h.bins[v];
        }
    }
    if (best < 0) throw InvalidArgument("histogram_peak: histogram is empty");
    return best;
}

/**
 * @brief Number of modes of the histogram after moving-average smoothing.
 *
 * The smoothing window is centered and zero-padded at both ends. The windowed
 * sums are compared directly (dividing by the window length does not move
 * maxima), which keeps the comparison exact. A maximal run of equal smoothed
 * values counts as one mode when it is nonzero and strictly above both of its
 * neighbours (missing neighbours past either end count as lower).
 */
inline int modality(const Histogram& h, int window = kDefaultModalityWindow) {
    if (window < 3 || window % 2 == 0) {
        throw InvalidArgument("modality window must be odd and >= 3, got " +
                              std::to_string(window));
    }
    const int half = window / 2;
    std::array<std::uint64_t, 256> smooth{};
    for (int v = 0; v < 256; ++v) {
        std::uint64_t s = 0;
        for (int j = v - half; j <= v + half; ++j) {
            if (j >= 0 && j < 256) s += h.bins[j];
        }
        smooth[v] = s;
    }

    int modes = 0;
    int start = 0;
    while (start < 256) {
        int end = start;
        while (end + 1 < 256 && smooth[end + 1] == smooth[start]) ++end;
        const std::uint64_t value = smooth[start];
        const bool above_left = start == 0 || smooth[start - 1] < value;
        const bool above_right = end == 255 || smooth[end + 1] < value;
        if (value > 0 && above_left && above_right) ++modes;
        start = end + 1;
    }
    return modes;
}

}  // namespace palmroi
