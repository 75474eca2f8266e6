/**
 * @file rng.hpp
 * @brief Portable, documented pseudo-random generator.
 *
 * Every random draw in the toolkit goes through Rng so that outputs are
 * bit-identical across compilers and platforms. The standard library
 * distributions are implementation-defined and are not used.
 *
 * Algorithm: xoshiro256** (Blackman & Vigna) with its 256-bit state filled
 * from a SplitMix64 sequence started at the seed.
 *
 *   uniform01()       = (next() >> 11) * 2^-53, in [0, 1)
 *   bernoulli(p)      = uniform01() < p
 *   uniform_below(n)  = Lemire's multiply-shift with rejection, unbiased
 *
 * Per-item seeds are derived with derive_seed(master, index), which is the
 * SplitMix64 finalizer applied to master + (index + 1) * 0x9E3779B97F4A7C15.
 */
#pragma once

#include <array>
#include <cstdint>

namespace shapebench {

/// SplitMix64 finalizer (bijective 64-bit mix).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9E3779B97F4A7C15ULL;
            word = mix64(s);
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

    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    __extension__ using u128 = unsigned __int128;

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_below(std::uint64_t n) noexcept {
        u128 m = static_cast<u128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<u128>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform integer in [lo, hi] inclusive. Requires lo <= hi.
    long long uniform_int(long long lo, long long hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(uniform_below(span));
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace shapebench
