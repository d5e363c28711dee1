#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace colonyroute {

/// SplitMix64 finalizer. Used for seeding and for deriving substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over bytes; stable across platforms.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed of an independent substream: seed XOR mix(a, b).
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a,
                                       std::uint64_t b) noexcept {
    return seed ^ mix64(mix64(a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/**
 * xoshiro256** (Blackman & Vigna). The algorithm is fixed so that a seed
 * produces the same stream on every platform; std distributions are avoided
 * for the same reason.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        // SplitMix64 sequence; never yields the all-zero state.
        std::uint64_t x = seed;
        for (auto &word : state_) {
            word = mix64(x);
            x += 0x9e3779b97f4a7c15ULL;
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, bound). bound must be > 0. Unbiased modulo
    /// with rejection of the short top range.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept {
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace colonyroute
