#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace uatta {

/// FNV-1a 64-bit over the bytes of `text`.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the substream for (seed, key, index); independent of corpus order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view key,
                                    std::uint64_t index) noexcept {
    return splitmix64(splitmix64(seed ^ fnv1a64(key)) + index);
}

/// Seeded random stream with platform-independent draws.
///
/// std::mt19937_64 is bit-specified by the standard, but the standard
/// distributions are not, so draws are derived from raw 64-bit outputs.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound must be > 0. Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace uatta
