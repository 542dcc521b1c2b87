#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

// Counter-based random streams.  Every draw is a pure function of
// (seed, stream, substream, counter), so Monte-Carlo replicates can be
// generated in any order, in parallel, and merged deterministically.

namespace roughlab::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c = 0) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ a);
    k = splitmix64(k ^ b);
    k = splitmix64(k ^ c);
    return k;
}

// Uniform in (0,1); never returns 0 or 1 exactly.
inline double u01(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                  std::uint64_t c = 0) {
    const std::uint64_t k = mix(seed, a, b, c);
    return static_cast<double>(k >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Pair of independent N(0,1) via Box-Muller.
inline void normal_pair(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c, double& n1, double& n2) {
    const double u1 = u01(seed, a, b, 2 * c);
    const double u2 = u01(seed, a, b, 2 * c + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    n1 = r * std::cos(2.0 * M_PI * u2);
    n2 = r * std::sin(2.0 * M_PI * u2);
}

inline double normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                     std::uint64_t c = 0) {
    double n1, n2;
    normal_pair(seed, a, b, c, n1, n2);
    return n1;
}

// Standard complex Gaussian, E|z|^2 = 1.
inline std::complex<double> complex_gaussian(std::uint64_t seed, std::uint64_t a,
                                             std::uint64_t b, std::uint64_t c = 0) {
    double re, im;
    normal_pair(seed, a, b, c, re, im);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace roughlab::rng
