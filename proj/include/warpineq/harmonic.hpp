#pragma once

// Scalar harmonic-series bounds underlying the matrix checks: two-sided
// bounds on sum_{k=1..v} 1/sqrt(k), the chained bound on sum sqrt(k), and the
// weighted variant with its two competing lower bounds (the stated one and
// the tighter one its derivation actually establishes — both are computed,
// violations are tallied separately).

#include <cstddef>
#include <span>

namespace warpineq::audit {

struct HarmonicBounds {
    std::size_t v = 0;
    double sum_inv_sqrt = 0.0; // sum_{k=1..v} 1/sqrt(k), accumulated in increasing k
    double lower = 0.0;        // 2 sqrt(v+1) - 2
    double upper = 0.0;        // 2 sqrt(v) - 1
};

// Requires v >= 2 (the bounds are strict only from there).
HarmonicBounds harmonic_inv_sqrt_bounds(std::size_t v);

struct SqrtSumChain {
    std::size_t v = 0;
    double sum_sqrt = 0.0; // sum sqrt(k)
    double middle = 0.0;   // (sum k) * (sum 1/sqrt(k))
    double cap = 0.0;      // v (v+1) (sqrt(v) - 0.5)
};

SqrtSumChain sqrt_sum_chain(std::size_t v);

struct WeightedHarmonicResult {
    std::size_t v = 0;
    double value = 0.0;           // sum x_k / sqrt(k)
    double lower_statement = 0.0; // min(x) / (v (v+1) (sqrt(v) - 0.5))
    double lower_proof = 0.0;     // min(x) / ((v+1) (sqrt(v) - 0.5))
    double upper = 0.0;           // v (2 sqrt(v) - 1) max(x)
};

// Weights must be strictly positive and at least two.
WeightedHarmonicResult weighted_harmonic_bounds(std::span<const double> xs);

struct SweepResult {
    std::size_t v_lo = 0;
    std::size_t v_hi = 0;
    double min_margin = 0.0;    // smallest slack seen across the whole range
    std::size_t violations = 0; // count of v where a bound failed outright
};

// Exhaustive range checks with incremental accumulation; O(v_hi) total.
SweepResult sweep_inv_sqrt_bounds(std::size_t v_lo, std::size_t v_hi);
SweepResult sweep_sqrt_sum_chain(std::size_t v_lo, std::size_t v_hi);

} // namespace warpineq::audit
