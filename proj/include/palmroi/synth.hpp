#pragma once

// Deterministic synthetic palm prints.
//
// An identity fixes the palm geometry: three thick principal lines, a set of
// thin wrinkles and a field of short ridge dashes whose density varies over
// the palm. A sample of that identity translates the whole palm, shifts the
// stroke intensities and adds per-pixel noise. Everything outside the palm
// rectangle (frame minus margins) is flat background plus noise, a little
// stronger than inside so that margins carry sparse edges unrelated to the
// identity.
//
// Only +, -, *, / and sqrt are used on doubles, so images are bit-identical
// across IEEE-754 platforms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "palmroi/image.hpp"
#include "palmroi/rng.hpp"

namespace palmroi {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Quadratic Bezier stroke p0 -> p2 bent toward p1, drawn at a fixed gray level.
struct Stroke {
    Point p0, p1, p2;
    int thickness = 1;
    int intensity = 0;
};

/// Circular bump in the ridge density field.
struct DensityBlob {
    Point center;
    double radius = 1.0;
};

/// Knobs shared by every identity and sample of a corpus.
struct SynthParams {
    int margin_x = 64;
    int margin_y = 40;
    int base_gray_min = 130;
    int base_gray_max = 190;
    int wrinkle_min = 8;
    int wrinkle_max = 20;
    int ridge_count = 500;
    int ridge_amplitude = 30;
    int max_shift = 6;
    int max_intensity_jitter = 10;
    double noise_sigma = 2.0;
    double margin_noise_sigma = 3.5;  ///< extra noise outside the palm rectangle
};

struct PalmModel {
    std::uint64_t identity_seed = 0;
    int base_gray = 160;
    int margin_x = 64;
    int margin_y = 40;
    std::vector<Stroke> principal_lines;
    std::vector<Stroke> wrinkles;
    int ridge_noise_amplitude = 30;  ///< contrast of ridge dashes; 0 disables them
    int ridge_count = 500;
    std::vector<DensityBlob> ridge_density;

    int wrinkle_count() const { return static_cast<int>(wrinkles.size()); }
};

struct SampleJitter {
    std::uint64_t sample_seed = 0;
    int dx = 0;
    int dy = 0;
    int intensity_delta = 0;
    double noise_sigma = 0.0;
    double margin_noise_sigma = 0.0;
};

namespace detail {

// Palm geometry stays this far inside the margin so that shifts of up to
// max_shift and the widest stamp (2 px) never reach it.
inline constexpr int kPalmInset = 8;
// Lines and wrinkles sit a further strip-width inside the ridge field.
inline constexpr int kStrokeInset = 14;

struct Box {
    double x0, y0, x1, y1;
    Point at(double u, double v) const { return {x0 + u * (x1 - x0), y0 + v * (y1 - y0)}; }
};

inline Box ridge_box(int width, int height, int mx, int my) {
    return {double(mx + kPalmInset), double(my + kPalmInset), double(width - 1 - mx - kPalmInset),
            double(height - 1 - my - kPalmInset)};
}

inline Box stroke_box(int width, int height, int mx, int my) {
    const Box r = ridge_box(width, height, mx, my);
    return {r.x0 + kStrokeInset, r.y0 + kStrokeInset, r.x1 - kStrokeInset, r.y1 - kStrokeInset};
}

inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

inline void check_frame(int width, int height, int mx, int my) {
    if (width < 100 || height < 100) {
        throw InvalidArgument("synthetic palms need at least 100x100 pixels, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
    if (mx < 0 || my < 0) throw InvalidArgument("margins must be non-negative");
    const Box s = stroke_box(width, height, mx, my);
    if (s.x1 - s.x0 < 20 || s.y1 - s.y0 < 20) {
        throw InvalidArgument("frame " + std::to_string(width) + "x" + std::to_string(height) +
                              " too small for margins " + std::to_string(mx) + "," + std::to_string(my));
    }
}

// Offset pattern for one stamp of the given thickness; corners are cut from
// stamps of 4 px and more.
inline std::vector<std::pair<int, int>> stamp_offsets(int thickness) {
    std::vector<std::pair<int, int>> out;
    const int lo = -(thickness - 1) / 2;
    const int hi = thickness / 2;
    for (int dy = lo; dy <= hi; ++dy) {
        for (int dx = lo; dx <= hi; ++dx) {
            const bool corner = (dx == lo || dx == hi) && (dy == lo || dy == hi);
            if (thickness >= 4 && corner) continue;
            out.emplace_back(dx, dy);
        }
    }
    return out;
}

}  // namespace detail

/// Pixels covered by `s` translated by (dx, dy); may contain duplicates.
inline std::vector<std::pair<int, int>> rasterize_stroke(const Stroke& s, int dx = 0, int dy = 0) {
    const double chord = std::sqrt((s.p1.x - s.p0.x) * (s.p1.x - s.p0.x) + (s.p1.y - s.p0.y) * (s.p1.y - s.p0.y)) +
                         std::sqrt((s.p2.x - s.p1.x) * (s.p2.x - s.p1.x) + (s.p2.y - s.p1.y) * (s.p2.y - s.p1.y));
    const int steps = std::max(1, static_cast<int>(std::ceil(chord * 2.0)));
    const auto stamp = detail::stamp_offsets(s.thickness);
    std::vector<std::pair<int, int>> pixels;
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const double a = (1.0 - t) * (1.0 - t);
        const double b = 2.0 * (1.0 - t) * t;
        const double c = t * t;
        const int cx = detail::round_half_up(a * s.p0.x + b * s.p1.x + c * s.p2.x) + dx;
        const int cy = detail::round_half_up(a * s.p0.y + b * s.p1.y + c * s.p2.y) + dy;
        for (const auto& [ox, oy] : stamp) pixels.emplace_back(cx + ox, cy + oy);
    }
    return pixels;
}

/// Bounding box of the principal lines as drawn for `jitter`.
inline RoiRect principal_line_bounds(const PalmModel& model, const SampleJitter& jitter) {
    int x0 = INT32_MAX, y0 = INT32_MAX, x1 = INT32_MIN, y1 = INT32_MIN;
    for (const Stroke& s : model.principal_lines) {
        for (const auto& [x, y] : rasterize_stroke(s, jitter.dx, jitter.dy)) {
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x0 > x1) return {};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

/// Identity geometry for a `width` x `height` frame.
inline PalmModel make_palm_model(std::uint64_t identity_seed, int width, int height,
                                 const SynthParams& params = {}) {
    detail::check_frame(width, height, params.margin_x, params.margin_y);
    SplitMix64 rng(identity_seed);
    PalmModel m;
    m.identity_seed = identity_seed;
    m.margin_x = params.margin_x;
    m.margin_y = params.margin_y;
    m.base_gray = static_cast<int>(rng.uniform_int(params.base_gray_min, params.base_gray_max));
    m.ridge_noise_amplitude = params.ridge_amplitude;
    m.ridge_count = params.ridge_count;

    const detail::Box box = detail::stroke_box(width, height, params.margin_x, params.margin_y);
    auto jittered = [&rng, &box](double u, double v, double spread) {
        return box.at(detail::clamp01(u + rng.uniform(-spread, spread)),
                      detail::clamp01(v + rng.uniform(-spread, spread)));
    };
    auto principal = [&](Point a, Point b, Point c) {
        Stroke s;
        s.p0 = jittered(a.x, a.y, 0.08);
        s.p1 = jittered(b.x, b.y, 0.10);
        s.p2 = jittered(c.x, c.y, 0.08);
        s.thickness = static_cast<int>(rng.uniform_int(3, 5));
        s.intensity = m.base_gray - static_cast<int>(rng.uniform_int(70, 95));
        return s;
    };
    // Heart line across the top, head line across the middle, life line
    // curving down around the thumb side.
    m.principal_lines.push_back(principal({0.95, 0.15}, {0.60, 0.02}, {0.15, 0.28}));
    m.principal_lines.push_back(principal({0.05, 0.42}, {0.45, 0.35}, {0.92, 0.62}));
    m.principal_lines.push_back(principal({0.30, 0.30}, {0.02, 0.60}, {0.35, 0.98}));

    const int wrinkles = static_cast<int>(rng.uniform_int(params.wrinkle_min, params.wrinkle_max));
    for (int i = 0; i < wrinkles; ++i) {
        const double u = rng.uniform01();
        const double v = rng.uniform01();
        const double du = rng.uniform(-0.25, 0.25);
        const double dv = rng.uniform(-0.25, 0.25);
        const double bend = rng.uniform(-0.08, 0.08);
        Stroke s;
        s.p0 = box.at(u, v);
        s.p1 = box.at(detail::clamp01(u + du / 2 - dv * bend * 4), detail::clamp01(v + dv / 2 + du * bend * 4));
        s.p2 = box.at(detail::clamp01(u + du), detail::clamp01(v + dv));
        s.thickness = static_cast<int>(rng.uniform_int(1, 2));
        s.intensity = m.base_gray - static_cast<int>(rng.uniform_int(35, 55));
        m.wrinkles.push_back(s);
    }

    const detail::Box rbox = detail::ridge_box(width, height, params.margin_x, params.margin_y);
    const double span = std::min(rbox.x1 - rbox.x0, rbox.y1 - rbox.y0);
    for (int i = 0; i < 3; ++i) {
        const Point c = rbox.at(rng.uniform01(), rng.uniform01());
        m.ridge_density.push_back({c, span * rng.uniform(0.25, 0.5)});
    }
    return m;
}

inline SampleJitter make_sample_jitter(std::uint64_t sample_seed, const SynthParams& params = {}) {
    SplitMix64 rng(sample_seed);
    SampleJitter j;
    j.sample_seed = sample_seed;
    j.dx = static_cast<int>(rng.uniform_int(-params.max_shift, params.max_shift));
    j.dy = static_cast<int>(rng.uniform_int(-params.max_shift, params.max_shift));
    j.intensity_delta = static_cast<int>(rng.uniform_int(-params.max_intensity_jitter, params.max_intensity_jitter));
    j.noise_sigma = params.noise_sigma;
    j.margin_noise_sigma = params.margin_noise_sigma;
    return j;
}

namespace detail {

inline double ridge_density(const PalmModel& m, Point p) {
    double bump = 0.0;
    for (const DensityBlob& b : m.ridge_density) {
        const double d2 = (p.x - b.center.x) * (p.x - b.center.x) + (p.y - b.center.y) * (p.y - b.center.y);
        bump = std::max(bump, 1.0 - d2 / (b.radius * b.radius));
    }
    return 0.5 + 0.5 * bump;
}

inline void put(GrayImage& img, int x, int y, int value) {
    if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return;
    img.at(x, y) = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
}

}  // namespace detail

/**
 * @brief Renders one sample of a palm.
 *
 * Layers, bottom to top: flat base gray, ridge dashes, wrinkles, principal
 * lines, then additive noise over the whole frame.
 */
inline GrayImage generate_palm(const PalmModel& model, const SampleJitter& jitter, int width, int height) {
    detail::check_frame(width, height, model.margin_x, model.margin_y);
    if (std::abs(jitter.dx) > detail::kPalmInset - 2 || std::abs(jitter.dy) > detail::kPalmInset - 2) {
        throw InvalidArgument("sample shift exceeds the palm inset");
    }
    GrayImage img(width, height, static_cast<std::uint8_t>(std::clamp(model.base_gray, 0, 255)));

    if (model.ridge_noise_amplitude > 0 && model.ridge_count > 0) {
        SplitMix64 rng(mix64(model.identity_seed ^ 0x52494447'45530000ULL));
        const detail::Box box = detail::ridge_box(width, height, model.margin_x, model.margin_y);
        const int level = model.base_gray - model.ridge_noise_amplitude + jitter.intensity_delta;
        int placed = 0;
        for (int attempt = 0; placed < model.ridge_count && attempt < model.ridge_count * 20; ++attempt) {
            const int len_x = static_cast<int>(rng.uniform_int(-4, 4));
            const int len_y = static_cast<int>(rng.uniform_int(-4, 4));
            const Point p = box.at(rng.uniform01(), rng.uniform01());
            const double keep = rng.uniform01();
            if (len_x == 0 && len_y == 0) continue;
            if (keep >= detail::ridge_density(model, p)) continue;
            const int x = detail::round_half_up(p.x);
            const int y = detail::round_half_up(p.y);
            const int steps = std::max(std::abs(len_x), std::abs(len_y));
            for (int i = 0; i <= steps; ++i) {
                const int px = std::clamp(x + detail::round_half_up(double(i * len_x) / steps), int(box.x0), int(box.x1));
                const int py = std::clamp(y + detail::round_half_up(double(i * len_y) / steps), int(box.y0), int(box.y1));
                detail::put(img, px + jitter.dx, py + jitter.dy, level);
            }
            ++placed;
        }
    }

    for (const auto* layer : {&model.wrinkles, &model.principal_lines}) {
        for (const Stroke& s : *layer) {
            for (const auto& [x, y] : rasterize_stroke(s, jitter.dx, jitter.dy)) {
                detail::put(img, x, y, s.intensity + jitter.intensity_delta);
            }
        }
    }

    if (jitter.noise_sigma > 0.0 || jitter.margin_noise_sigma > 0.0) {
        SplitMix64 rng(mix64(jitter.sample_seed ^ 0x4E4F4953'45000000ULL));
        const RoiRect palm{model.margin_x, model.margin_y, width - 2 * model.margin_x, height - 2 * model.margin_y};
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const bool inside = x >= palm.x0 && x < palm.x1() && y >= palm.y0 && y < palm.y1();
                const double sigma = inside ? jitter.noise_sigma : jitter.noise_sigma + jitter.margin_noise_sigma;
                if (sigma <= 0.0) continue;
                const int v = img.at(x, y) + detail::round_half_up(sigma * rng.approx_normal());
                img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
            }
        }
    }
    return img;
}

}  // namespace palmroi
