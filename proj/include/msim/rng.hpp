// rng.hpp
// Seedable RNG streams with a fixed splitting rule, so every sampled quantity
// is reproducible independent of thread scheduling.
//
// Stream rule: substream k of purpose `tag` under master seed s is an
// mt19937_64 seeded with mix(s, fnv1a(tag), k).  Bounded draws use rejection
// sampling on raw 64-bit outputs (no std::uniform_int_distribution, whose
// output is implementation-defined).

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace msim {

// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t index = 0) {
    return mix64(mix64(master ^ fnv1a(tag)) + index);
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}
    RngStream(std::uint64_t master, std::string_view tag, std::uint64_t index = 0)
        : eng_(derive_seed(master, tag, index)) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, n) by rejection; identical sequence on every platform.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace msim
