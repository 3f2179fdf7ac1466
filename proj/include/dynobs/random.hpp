#pragma once

#include <cstdint>

namespace dynobs {

/// SplitMix64 (Steele, Lea, Flood). Every random draw in the project flows
/// through this generator so results are reproducible from a single seed.
///
///   state += 0x9e3779b97f4a7c15
///   z = state
///   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
///   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
///   return z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [0, n) by rejection: raw words below 2^64 mod n are
    /// discarded, then the word is reduced mod n. n = 0 means 2^64.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return next();
        const std::uint64_t reject_below = (std::uint64_t{0} - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= reject_below) return r % n;
        }
    }

    /// Uniform draw from the closed interval [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
    }

private:
    std::uint64_t state_;
};

/// Seed for the index-th independent sub-stream: the first output of
/// SplitMix64(seed + index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed + index).next();
}

} // namespace dynobs
