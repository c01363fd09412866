#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <vector>

namespace fmcit {

// splitmix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic seed derivation from a base seed and context values.
// Independent of call-site traversal order by construction.
inline std::uint64_t seed_mix(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x8FB6C2A197D3E415ull;
    for (std::uint64_t v : parts) h = mix64(h ^ mix64(v));
    return h;
}

inline std::uint64_t seed_mix(std::uint64_t base, std::uint64_t a) {
    return seed_mix({base, a});
}

inline std::uint64_t seed_mix(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return seed_mix({base, a, b});
}

// Seed for a CI query (i, j, S): canonicalizes internally, so the value does
// not depend on edge direction or the order S was assembled in.
inline std::uint64_t seed_for_query(std::uint64_t base, int i, int j, std::vector<int> s) {
    std::uint64_t h = seed_mix({base, static_cast<std::uint64_t>(std::min(i, j)),
                                static_cast<std::uint64_t>(std::max(i, j))});
    std::sort(s.begin(), s.end());
    for (int v : s) h = mix64(h ^ mix64(static_cast<std::uint64_t>(v) + 0x51ED2701ull));
    return h;
}

namespace detail {
inline double to_unit_open(std::uint64_t bits) {
    // (0,1): 53-bit mantissa shifted into the open interval
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}
}  // namespace detail

// Counter-based standard normal keyed by (seed, step, row, col).
// Batched and chunked executions agree as long as callers pass global row ids.
inline double counter_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t row, std::uint64_t col) {
    std::uint64_t h = seed_mix({seed, step, row, col});
    double u1 = detail::to_unit_open(mix64(h ^ 0xA5A5A5A5A5A5A5A5ull));
    double u2 = detail::to_unit_open(mix64(h ^ 0x5A5A5A5A5A5A5A5Aull));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fmcit
