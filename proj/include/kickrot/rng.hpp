#pragma once

#include <cstdint>

namespace kickrot::rng {

// Stateless counter-based generator. Every random draw in the project is a
// pure function of (seed, stream, counter), so runs reproduce exactly and
// work can be partitioned across workers without coordinating RNG state.

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(mix(seed, stream, counter) >> 11) * 0x1.0p-53;
}

} // namespace kickrot::rng
