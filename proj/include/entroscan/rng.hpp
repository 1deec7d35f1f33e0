// Reproducible random streams. Every worker/segment/trial stream is derived
// from one master seed plus integer tags, so results do not depend on thread
// count or evaluation order. Bounded draws use Lemire reduction on the raw
// 64-bit output, which is fully specified by the standard for mt19937_64.
#pragma once

#include <cstdint>
#include <random>

namespace entroscan {

inline std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b = 0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(tag_a), static_cast<std::uint32_t>(tag_a >> 32),
        static_cast<std::uint32_t>(tag_b), static_cast<std::uint32_t>(tag_b >> 32)};
    return std::mt19937_64(seq);
}

// Uniform integer in [0, bound)
inline std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        std::uint64_t threshold = (-bound) % bound;
        while (lo < threshold) {
            m = static_cast<unsigned __int128>(rng()) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Uniform double in [0, 1) with 53 random bits
inline double next_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace entroscan
