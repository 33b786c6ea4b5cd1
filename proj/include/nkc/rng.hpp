#pragma once

#include <cstdint>
#include <random>

namespace nkc {

/// All randomness flows through std::mt19937_64 (bit-stable across
/// platforms by the standard) plus the helpers below. The standard
/// distribution adaptors are avoided on purpose: their output is
/// implementation-defined, which would break cross-toolchain replay.
using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Derive an independent stream seed from a master seed and a salt.
/// Chainable: derive_seed(derive_seed(master, i), j) splits per (i, j).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    return detail::splitmix64(master ^ detail::splitmix64(salt));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    // Rejection from the top of the range; at most one retry in expectation.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

/// One fair bit.
inline int uniform_bit(Rng& rng) { return static_cast<int>(rng() >> 63); }

}  // namespace nkc
