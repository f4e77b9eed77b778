#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stpc {

// Counter-based generator built on the SplitMix64 finalizer:
//   word(c)      = mix64(seed + (c+1) * 0x9E3779B97F4A7C15)
//   mix64(z)     : z ^= z>>30; z *= 0xBF58476D1CE4E5B9;
//                  z ^= z>>27; z *= 0x94D049BB133111EB; z ^= z>>31
//   uniform01(c) = (word(c) >> 11) * 2^-53
// Substream i rehashes (seed, i) with a domain constant, so parallel trials
// draw from disjoint deterministic streams and any (seed, n) pair reproduces
// the identical sample on every platform.
struct CounterRng {
    uint64_t seed = 0;

    static uint64_t mix64(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t word(uint64_t counter) const {
        return mix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
    }

    double uniform01(uint64_t counter) const {
        return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
    }

    CounterRng substream(uint64_t index) const {
        return CounterRng{mix64((seed ^ 0xD1B54A32D192ED03ULL) + (index + 1) * 0x9E3779B97F4A7C15ULL)};
    }
};

// Cascade (pairwise) summation; deterministic for a fixed input order and
// insensitive to accumulation noise down to ~1e-12 relative.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    return pairwise_sum(v) / static_cast<double>(v.size());
}

} // namespace stpc
