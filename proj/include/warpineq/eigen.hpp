#pragma once

// Spectral decompositions and the norms the audits are stated in. The
// symmetric eigensolver is a cyclic Jacobi iteration: deterministic, accurate
// to near machine precision at the dimensions this artifact targets (<= 64),
// and self-contained.

#include <cstddef>
#include <optional>
#include <vector>

#include "warpineq/matrix.hpp"

namespace warpineq {

// Eigenvalues below this floor disqualify a matrix as positive definite.
inline constexpr double kPdFloor = 1e-10;

struct SymmetricEigen {
    std::vector<double> values; // decreasing
    Matrix vectors;             // columns, orthonormal
};

// Cyclic Jacobi. Input must be square and symmetric within a 1e-12 relative
// tolerance (std::invalid_argument otherwise). Iterates until the
// off-diagonal Frobenius mass falls below 1e-13 * hs_norm(input); throws
// ConvergenceError carrying the residual if 100 sweeps do not get there.
SymmetricEigen symmetric_eigen(const Matrix& a);

struct SpectralSummary {
    std::vector<double> singular_values; // decreasing, min(rows, cols) entries
    // Populated when the input is symmetric: eigenvalues of the input itself.
    std::optional<std::vector<double>> eigenvalues_symmetric;
};

// Singular values as sqrt(max(lambda, 0)) of the eigenvalues of A^T A.
SpectralSummary singular_values(const Matrix& a);

// Largest singular value.
double spectral_norm(const Matrix& a);

// Sum of p-th powers of the singular values, p >= 1. Deliberately NOT raised
// to the power 1/p: the audited statements use the plain power sum, and the
// checks must exercise the bounds exactly as written.
double schatten_sum_norm(const Matrix& a, double p);

// Sum of the k largest singular values, 1 <= k <= min(rows, cols).
double kyfan_norm(const Matrix& a, std::size_t k);

struct PsdOrderWitness {
    double lhs_minus_rhs_min_eigenvalue = 0.0;
    bool holds = false;
};

// Loewner order test: a - b is PSD up to order_tolerance on the bottom
// eigenvalue. Both inputs must be symmetric with equal dimensions.
PsdOrderWitness psd_order(const Matrix& a, const Matrix& b, double order_tolerance);

// A^{-1/2} for symmetric positive definite A via the eigendecomposition.
// Throws HypothesisError naming the offending eigenvalue when min lambda is
// at or below kPdFloor.
Matrix inverse_sqrt_pd(const Matrix& a);

// A^k by repeated multiplication, k >= 1.
Matrix matrix_power(const Matrix& a, std::size_t k);

} // namespace warpineq
