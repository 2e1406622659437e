#pragma once

#include <cstdint>
#include <initializer_list>

namespace delchan {

// Counter-based generator: every draw is a pure function of a 64-bit seed
// and a handful of counter words. There is no stream state, so draws are
// order-independent and safe to evaluate from any worker.

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a) {
    return mix64(mix64(seed) ^ a);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(derive(seed, a) ^ mix64(b + 0x6a09e667f3bcc909ull));
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) {
    return mix64(derive(seed, a, b) ^ mix64(c + 0xbb67ae8584caa73bull));
}

// Uniform integer in [0, n] via the 128-bit multiply trick; bias < n/2^64.
inline std::uint64_t uniform_upto(std::uint64_t h, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(h) * (static_cast<unsigned __int128>(n) + 1)) >> 64);
}

// Uniform real in [0, 1) with 53 random bits.
inline double unit_real(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace delchan
