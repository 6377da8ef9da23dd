"""Numerical audits of warped-product curvature inequalities and the
singular-value / harmonic-series matrix bounds behind them.

Everything lives in the compiled core; this package just re-exports it.
"""

from warpineq._core import (  # noqa: F401
    TOOL_VERSION,
    AuditReport,
    ConvergenceError,
    DimResult,
    HypothesisError,
    Matrix,
    ParseError,
    Violation,
    c1_sides,
    derive_seed,
    fan_dominance,
    gen_doubly_stochastic,
    gen_orthogonal,
    gen_pd_doubly_stochastic,
    gen_pd_hs_contraction,
    gen_positive_definite,
    gen_symmetric,
    geometry_audit,
    geometry_models,
    harmonic_inv_sqrt_bounds,
    hs_norm,
    inverse_sqrt_pd,
    is_doubly_stochastic,
    kyfan_norm,
    kyfan_variational_check,
    load_matrix_text,
    matrix_power,
    psd_order,
    registered_checks,
    report_to_csv,
    report_to_json,
    run_audit,
    save_matrix_text,
    schatten_sum_norm,
    singular_values,
    spectral_norm,
    sqrt_sum_chain,
    sweep_inv_sqrt_bounds,
    sweep_sqrt_sum_chain,
    symmetric_eigen,
    t0_sides,
    t010_sides,
    weighted_harmonic_bounds,
)

__version__ = "0.1.0"
