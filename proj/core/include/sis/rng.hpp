#pragma once

#include <cmath>
#include <cstdint>

namespace sis {

// Counter-based deterministic random streams ("splitmix64-counter-v1").
//
// Scheme: mix() is the splitmix64 finalizer. A stream is a 64-bit key; the
// value at counter c is mix(key + (c+1)*GOLDEN). Stream keys for trial t are
// derived as derive_stream(seed, t) = mix(mix(seed) ^ ((t+1)*GOLDEN)), so any
// implementation of the same scheme reproduces the byte-identical reports.
// Draws are pure functions of (key, counter): safe to evaluate concurrently
// and to regenerate from the recorded (seed, index) pair.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ ((index + 1) * kGolden));
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix64(key_ + (counter + 1) * kGolden);
    }

    // Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform01(counter);
    }

    // Standard normal via Box-Muller; consumes counters 2k and 2k+1 of a
    // dedicated sub-stream, so callers index gaussians by k directly.
    double gaussian(std::uint64_t k) const {
        const double u1 = 1.0 - uniform01(2 * k);      // (0, 1]
        const double u2 = uniform01(2 * k + 1);        // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

}  // namespace sis
