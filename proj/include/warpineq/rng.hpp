#pragma once

// Deterministic random streams. std::mt19937_64 has a fully specified output
// sequence, and the uniform/normal conversions below avoid the unspecified
// std::*_distribution algorithms, so a given seed yields the same draws on
// every standard-conforming implementation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace warpineq {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; consumes two uniforms per call.
    double normal() {
        double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
} // namespace detail

// Counter-based seed derivation: trial t of dimension d under a master seed
// gets an independent stream, stable across hosts and unaffected by how work
// is scheduled. `salt` separates multiple draws within one trial.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t dim,
                                 std::uint64_t trial = 0, std::uint64_t salt = 0) {
    std::uint64_t s = detail::splitmix64(master ^ 0xA0761D6478BD642FULL);
    s = detail::splitmix64(s ^ dim);
    s = detail::splitmix64(s ^ trial);
    s = detail::splitmix64(s ^ salt);
    return s;
}

} // namespace warpineq
