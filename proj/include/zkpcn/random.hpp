#ifndef ZKPCN_RANDOM_HPP
#define ZKPCN_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "zkpcn/types.hpp"

namespace zkpcn {

// All randomness flows through mt19937_64 plus the samplers below, never
// through std::*_distribution (whose output is implementation-defined).
// A (seed, draw index) pair therefore pins every sampled value.
using Rng = std::mt19937_64;

// splitmix64; used to derive independent substream seeds from one run seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform integer in [0, n), unbiased via rejection.
inline std::uint64_t rand_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("rand_below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

// Uniform in the open interval (0, 1): 53 random bits offset by half an ulp.
inline double rand_unit_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

inline bool rand_bernoulli(Rng& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return rand_unit_open(rng) < p;
}

// Exponential with the given rate, via inversion.
inline double rand_exponential(Rng& rng, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("rand_exponential: rate must be positive");
    return -std::log(rand_unit_open(rng)) / rate;
}

inline Nonce rand_nonce(Rng& rng) {
    Nonce n{};
    std::uint64_t lo = rng();
    std::uint64_t hi = rng();
    for (int i = 0; i < 8; ++i) {
        n[i] = static_cast<std::uint8_t>(lo >> (8 * i));
        n[8 + i] = static_cast<std::uint8_t>(hi >> (8 * i));
    }
    return n;
}

}  // namespace zkpcn

#endif  // ZKPCN_RANDOM_HPP
