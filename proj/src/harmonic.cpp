#include "warpineq/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace warpineq::audit {

namespace {

void require_v(std::size_t v, const char* who) {
    if (v < 2) {
        throw std::invalid_argument(std::string(who) + ": v must be >= 2, got " +
                                    std::to_string(v));
    }
}

double cap_term(std::size_t v) {
    double dv = static_cast<double>(v);
    return dv * (dv + 1.0) * (std::sqrt(dv) - 0.5);
}

} // namespace

HarmonicBounds harmonic_inv_sqrt_bounds(std::size_t v) {
    require_v(v, "harmonic_inv_sqrt_bounds");
    double sum = 0.0;
    for (std::size_t k = 1; k <= v; ++k) sum += 1.0 / std::sqrt(static_cast<double>(k));
    return {v, sum, 2.0 * std::sqrt(static_cast<double>(v) + 1.0) - 2.0,
            2.0 * std::sqrt(static_cast<double>(v)) - 1.0};
}

SqrtSumChain sqrt_sum_chain(std::size_t v) {
    require_v(v, "sqrt_sum_chain");
    double sum_sqrt = 0.0, sum_inv_sqrt = 0.0;
    for (std::size_t k = 1; k <= v; ++k) {
        double dk = static_cast<double>(k);
        sum_sqrt += std::sqrt(dk);
        sum_inv_sqrt += 1.0 / std::sqrt(dk);
    }
    double dv = static_cast<double>(v);
    double sum_k = dv * (dv + 1.0) / 2.0;
    return {v, sum_sqrt, sum_k * sum_inv_sqrt, cap_term(v)};
}

WeightedHarmonicResult weighted_harmonic_bounds(std::span<const double> xs) {
    if (xs.size() < 2) {
        throw std::invalid_argument("weighted_harmonic_bounds: need at least 2 weights, got " +
                                    std::to_string(xs.size()));
    }
    double min_x = xs[0], max_x = xs[0];
    for (double x : xs) {
        if (!(x > 0.0)) {
            throw std::invalid_argument("weighted_harmonic_bounds: weights must be strictly "
                                        "positive, got " + std::to_string(x));
        }
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
    }
    double value = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        value += xs[k] / std::sqrt(static_cast<double>(k + 1));
    }
    std::size_t v = xs.size();
    double dv = static_cast<double>(v);
    return {v, value,
            min_x / cap_term(v),
            min_x / ((dv + 1.0) * (std::sqrt(dv) - 0.5)),
            dv * (2.0 * std::sqrt(dv) - 1.0) * max_x};
}

SweepResult sweep_inv_sqrt_bounds(std::size_t v_lo, std::size_t v_hi) {
    require_v(v_lo, "sweep_inv_sqrt_bounds");
    if (v_hi < v_lo) {
        throw std::invalid_argument("sweep_inv_sqrt_bounds: empty range");
    }
    double sum = 1.0; // k = 1 term
    for (std::size_t k = 2; k < v_lo; ++k) sum += 1.0 / std::sqrt(static_cast<double>(k));

    SweepResult out{v_lo, v_hi, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t v = v_lo; v <= v_hi; ++v) {
        sum += 1.0 / std::sqrt(static_cast<double>(v));
        double dv = static_cast<double>(v);
        double lower = 2.0 * std::sqrt(dv + 1.0) - 2.0;
        double upper = 2.0 * std::sqrt(dv) - 1.0;
        double margin = std::min(sum - lower, upper - sum);
        out.min_margin = std::min(out.min_margin, margin);
        // The bounds are strict; a zero-or-negative margin is a finding.
        if (margin <= 0.0) ++out.violations;
    }
    return out;
}

SweepResult sweep_sqrt_sum_chain(std::size_t v_lo, std::size_t v_hi) {
    require_v(v_lo, "sweep_sqrt_sum_chain");
    if (v_hi < v_lo) {
        throw std::invalid_argument("sweep_sqrt_sum_chain: empty range");
    }
    double sum_sqrt = 1.0, sum_inv_sqrt = 1.0; // k = 1 terms
    for (std::size_t k = 2; k < v_lo; ++k) {
        double dk = static_cast<double>(k);
        sum_sqrt += std::sqrt(dk);
        sum_inv_sqrt += 1.0 / std::sqrt(dk);
    }
    SweepResult out{v_lo, v_hi, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t v = v_lo; v <= v_hi; ++v) {
        double dv = static_cast<double>(v);
        sum_sqrt += std::sqrt(dv);
        sum_inv_sqrt += 1.0 / std::sqrt(dv);
        double middle = dv * (dv + 1.0) / 2.0 * sum_inv_sqrt;
        double margin = std::min(middle - sum_sqrt, cap_term(v) - middle);
        out.min_margin = std::min(out.min_margin, margin);
        if (margin < 0.0) ++out.violations; // the chain is non-strict
    }
    return out;
}

} // namespace warpineq::audit
