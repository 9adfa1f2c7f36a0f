#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace enrollcast {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// 64-bit FNV-1a over the bytes of `text`.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Child seed for stream `label` of item `index` under `master`:
//   mix64(mix64(master ^ mix64(index)) ^ fnv1a64(label))
// Stable across platforms and releases; forecasts depend on it bit-for-bit.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::string_view label) noexcept {
    return mix64(mix64(master ^ mix64(index)) ^ fnv1a64(label));
}

// xoshiro256** engine, seeded by expanding one 64-bit word with SplitMix64.
// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            s = mix64(x);
            x += 0x9e3779b97f4a7c15ULL;
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
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

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace enrollcast
