#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

// Reproducible random streams.
//
// Generator: xoshiro256** 1.0 (Blackman/Vigna, public domain), seeded with
// four successive SplitMix64 outputs of the 64-bit seed. Derived quantities
// are fixed as follows and are part of the library's compatibility contract:
//
//   unit double   = (next_u64() >> 11) * 2^-53                  in [0,1)
//   normal pair   = Box-Muller: r = sqrt(-2 ln u1), u1 in (0,1]
//                   z0 = r cos(2 pi u2), z1 = r sin(2 pi u2)
//   fill_normal   = pairs in order; an odd tail consumes a full pair and
//                   keeps z0
//   next_below(n) = rejection from next_u64(), threshold (2^64 - n) mod n
//
// Stream derivation: every consumer seeds its own Rng with
// derive_stream(base, tag, index). Solver factor streams use
// base = config seed + tensor index (mod 2^64), which is what lets a
// single-tensor run reproduce one tensor's streams out of a multi-tensor run.

namespace mtc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Role tags for derive_stream.
inline constexpr std::uint64_t kStreamFactorU = 0x5548A1D6C0FFEE01ULL;
inline constexpr std::uint64_t kStreamFactorV = 0x56B2D90D5EED5EEDULL;
inline constexpr std::uint64_t kStreamMask = 0x4D41534B9E3779B9ULL;
inline constexpr std::uint64_t kStreamSynthFactor = 0x53594E5446414354ULL;
inline constexpr std::uint64_t kStreamSynthCore = 0x53594E54434F5245ULL;
inline constexpr std::uint64_t kStreamSynthNoise = 0x53594E544E4F4953ULL;

inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t tag, std::uint64_t index) {
    std::uint64_t s = base ^ tag;
    std::uint64_t first = splitmix64(s);
    std::uint64_t t = first + index;
    return splitmix64(t);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
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

    /// Uniform in [0,1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0,n), unbiased.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t r = next_u64();
        while (r < threshold) r = next_u64();
        return r % n;
    }

    /// Standard normal pair via Box-Muller.
    std::array<double, 2> next_normal_pair() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0,1]
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    void fill_normal(std::span<double> out) {
        std::size_t i = 0;
        for (; i + 1 < out.size(); i += 2) {
            const auto z = next_normal_pair();
            out[i] = z[0];
            out[i + 1] = z[1];
        }
        if (i < out.size()) out[i] = next_normal_pair()[0];
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_;
};

}  // namespace mtc
