#pragma once

#include <cmath>
#include <cstdint>

namespace ukcm {

// Counter-based 64-bit generator (splitmix64). Trial streams are derived as
// stream(seed, trial) so parallel trials stay reproducible regardless of
// scheduling. Sequences are bit-stable within this implementation only.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t s = 0x853c49e6748fea9bULL) : state(s) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        return mix(state);
    }

    // in [0,1)
    double uniform01() { return (double)(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // uniform in [0, n), multiply-shift to stay deterministic across platforms
    std::uint64_t below(std::uint64_t n) {
        return (std::uint64_t)(((__uint128_t)next() * n) >> 64);
    }
};

inline SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(SplitMix64::mix(seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

// Pair-selection policy of the merging algorithms; the canonical order is
// deterministic and Random exists to test order-independence claims.
enum class MergeOrder { Canonical, Random };

}  // namespace ukcm
