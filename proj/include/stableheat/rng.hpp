#pragma once

#include <cstdint>
#include <random>

namespace stableheat {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Per-path seed: splitmix64(master ^ splitmix64(index)). Order independent.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index));
}

inline constexpr const char* kSeedRule = "splitmix64(master ^ splitmix64(path_index))";

// Uniform on (0, 1]; 53 random bits, never 0.
inline double uniform_open0(std::mt19937_64& eng) {
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

// Uniform on [0, 1); never 1.
inline double uniform_open1(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace stableheat
