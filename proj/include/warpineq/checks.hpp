#pragma once

// Matrix inequality checks. Each *_sides function evaluates both sides of one
// audited statement and returns them without asserting, so callers decide
// whether a failed comparison is a finding (recorded violation) or a bug.
// Hypothesis failures throw HypothesisError and are never counted as
// violations.

#include <cstddef>
#include <cstdint>
#include <string>

#include "warpineq/matrix.hpp"

namespace warpineq::audit {

struct TwoSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

// hs_norm(sum_{k=1..v} sqrt(k) A^k)  vs  v(v+1)(sqrt(v)-0.5)(u - u^{v+1})/(1-u)
// with u = hs_norm(A). Hypotheses: symmetric positive definite, v >= 2, and
// hs_norm(A) < 1 — the last is the repaired premise without which the right
// side is not even monotone in u.
TwoSides t010_sides(const Matrix& a);

// Same left side for a symmetric positive definite doubly stochastic A;
// right side v^2 (v+1) (sqrt(v) - 0.5). Note hs_norm of such A exceeds 1 for
// every v >= 2, so this check deliberately does NOT route through t010.
TwoSides c1_sides(const Matrix& a);

// The three readings of the ambiguous summation index m in the singular-value
// sandwich: floor of t_1(A), floor of t_v(A), or the dimension itself.
enum class T0Interpretation { floor_t1, floor_tv, dim };

T0Interpretation parse_interpretation(const std::string& name);
std::string interpretation_name(T0Interpretation interp);

struct T0Sides {
    double lower = 0.0;  // t_v(X) (2 sqrt(m+1) - 2)
    double middle = 0.0; // sum_{k=1..m} t_k(X A^{-1/2})
    double upper = 0.0;  // (2 sqrt(m) - 1) t_1(X)
    std::size_t m = 0;
};

// Both operands symmetric positive definite with equal dimension v >= 2.
// Hypothesis gate: floor(t_j(A)) <= v for the interpretation's index j
// (j = 1 for floor_t1 and dim, j = v for floor_tv); m is clamped to [1, v].
// Returns the three sides without asserting either comparison — the lower
// bound in particular fails on concrete inputs and the audit records that.
T0Sides t0_sides(const Matrix& x, const Matrix& a, T0Interpretation interp);

struct KyFanVariational {
    double best_sampled = 0.0; // max over sampled orthonormal k-tuples
    double svd_value = 0.0;    // kyfan_norm(a, k)
    double attained = 0.0;     // value at the top singular vector pairs
};

// Samples `tuples` orthonormal k-tuple pairs (x_j), (y_j) and evaluates
// sum_j |y_j^T A x_j|. best_sampled never exceeds svd_value + 1e-9, and the
// singular-vector pairs attain it within 1e-8.
KyFanVariational kyfan_variational_check(const Matrix& a, std::size_t k,
                                         std::size_t tuples, std::uint64_t seed);

// True iff every Ky Fan norm of a dominates that of b, with 1e-9 slack.
bool fan_dominance(const Matrix& a, const Matrix& b, double tol = 1e-9);

} // namespace warpineq::audit
