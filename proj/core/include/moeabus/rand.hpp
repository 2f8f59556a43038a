// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace moeabus {

/// Stateless 64-bit mixer (splitmix64 finalizer). All derived randomness in
/// the library funnels through this function so that independent
/// implementations can reproduce every seed stream bit for bit.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent child seed from (master, stream, counter).
/// Scheme: h = splitmix64(master); h = splitmix64(h ^ splitmix64(stream));
/// h = splitmix64(h ^ splitmix64(counter)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t counter = 0) noexcept {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ splitmix64(stream));
    h = splitmix64(h ^ splitmix64(counter));
    return h;
}

/// Maps a mixed 64-bit word onto [0, 1) using the top 53 bits.
constexpr double to_unit_interval(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(splitmix64(seed));
}

}  // namespace moeabus
