#pragma once

// Seeded generators for the matrix classes the audits quantify over. Every
// generator is a pure function of its GenSpec: same spec, same bytes,
// regardless of host or thread count.

#include <cstddef>
#include <cstdint>

#include "warpineq/matrix.hpp"

namespace warpineq::gen {

enum class MatrixKind {
    orthogonal,
    symmetric,
    positive_definite,
    pd_hs_contraction,
    doubly_stochastic,
    pd_doubly_stochastic,
};

struct GenSpec {
    std::size_t dim = 2; // valid range [2, 64]
    MatrixKind kind = MatrixKind::symmetric;
    std::uint64_t seed = 0;
    double alpha = 0.25; // pd_doubly_stochastic mixing weight, (0, 0.5)
};

Matrix generate(const GenSpec& spec);

// Modified Gram-Schmidt on a standard-normal draw; Q^T Q = I within 1e-10.
// Redraws on near-breakdown, at most 8 attempts.
Matrix gen_orthogonal(std::size_t dim, std::uint64_t seed);

// Symmetrized standard-normal draw, (G + G^T)/2.
Matrix gen_symmetric(std::size_t dim, std::uint64_t seed);

// Q diag(lambda) Q^T with lambda uniform on [0.1, 10].
Matrix gen_positive_definite(std::size_t dim, std::uint64_t seed);

// Positive definite rescaled so hs_norm equals a draw from [0.05, 0.95];
// every output satisfies the strict-contraction hypothesis hs_norm < 1.
Matrix gen_pd_hs_contraction(std::size_t dim, std::uint64_t seed);

// Sinkhorn-Knopp on a strictly positive uniform(0.1, 1) draw. Row and column
// sums land within 1e-12 of 1; at most 10000 sweeps (ConvergenceError with
// the residual otherwise).
Matrix gen_doubly_stochastic(std::size_t dim, std::uint64_t seed);

// (1 - alpha) I + alpha S with S the symmetrized, re-normalized output of
// gen_doubly_stochastic. Symmetric, doubly stochastic, and positive definite
// with min eigenvalue >= 1 - 2 alpha (up to 1e-10).
Matrix gen_pd_doubly_stochastic(std::size_t dim, std::uint64_t seed, double alpha = 0.25);

// The mixing step itself, exposed for direct verification against hand
// examples: (1 - alpha) I + alpha s.
Matrix mix_with_identity(const Matrix& s, double alpha);

// Alternating row/column normalization until every sum is within tol of 1.
Matrix sinkhorn_normalize(Matrix a, double tol = 1e-12, int max_sweeps = 10000);

} // namespace warpineq::gen
