#pragma once

// SplitMix64 and the seed derivation used by the synthetic corpus.
// The bit-level algorithm is fixed (see docs/synthetic_data.md) so corpora are
// reproducible by any implementation.

#include <cstdint>

namespace palmroi {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output function applied to `z + gamma`.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += kGoldenGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        const std::uint64_t out = mix64(state_);
        state_ += kGoldenGamma;
        return out;
    }

    /// Uniform integer in [lo, hi] by modulo reduction.
    constexpr std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    constexpr double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Zero-mean unit-variance approximation to a normal: scaled sum of four uniforms.
    /// Uses only +, - and * so results are bit-identical on IEEE-754 platforms.
    constexpr double approx_normal() {
        const double s = uniform01() + uniform01() + uniform01() + uniform01();
        return (s - 2.0) * 1.7320508075688772;  // sqrt(3): variance of the sum is 1/3
    }

private:
    std::uint64_t state_;
};

/// Seed of identity `identity` in a corpus generated from `master`.
constexpr std::uint64_t identity_seed(std::uint64_t master, std::uint64_t identity) {
    return mix64(mix64(master) + identity);
}

/// Seed of sample `sample` of identity `identity`.
constexpr std::uint64_t sample_seed(std::uint64_t master, std::uint64_t identity, std::uint64_t sample) {
    return mix64(identity_seed(master, identity) ^ mix64(0x5341'4D50'0000'0000ULL + sample));
}

}  // namespace palmroi
