"""Smoke tests for the Python bindings: numpy round trips, a few pinned
values, and the high-level audit entry points."""

import json
import math

import numpy as np
import pytest

import warpineq as wi


def test_version():
    assert wi.__version__ == "0.1.0"
    assert wi.TOOL_VERSION == "warpineq 0.1.0"


def test_matrix_numpy_round_trip():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    m = wi.Matrix(a)
    assert m.rows == 2 and m.cols == 2
    back = m.numpy()
    assert back.dtype == np.float64
    np.testing.assert_array_equal(back, a)
    # The copy is detached from the source array.
    a[0, 0] = 99.0
    assert m.numpy()[0, 0] == 1.0


def test_matrix_rejects_bad_input():
    with pytest.raises(Exception):
        wi.Matrix(np.array([1.0, 2.0]))  # 1-D
    with pytest.raises(ValueError):
        wi.Matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_norms_against_numpy():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((5, 5))
    assert wi.hs_norm(a) == pytest.approx(np.linalg.norm(a, "fro"), rel=1e-12)
    assert wi.spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)
    sv = wi.singular_values(a)
    np.testing.assert_allclose(sv, np.linalg.svd(a, compute_uv=False), atol=1e-10)
    k = 3
    assert wi.kyfan_norm(a, k) == pytest.approx(sum(sv[:k]), rel=1e-12)
    # Plain power sum on purpose — no 1/p root.
    assert wi.schatten_sum_norm(a, 2.0) == pytest.approx(np.sum(sv**2), rel=1e-10)


def test_symmetric_eigen_reconstructs():
    rng = np.random.default_rng(11)
    g = rng.standard_normal((6, 6))
    a = (g + g.T) / 2.0
    values, vectors = wi.symmetric_eigen(a)
    assert list(values) == sorted(values, reverse=True)
    np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.T, a, atol=1e-12)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(6), atol=1e-10)


def test_eigen_rejects_asymmetric():
    with pytest.raises(ValueError):
        wi.symmetric_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_inverse_sqrt_pd_raises_on_indefinite():
    with pytest.raises(ValueError):
        wi.inverse_sqrt_pd(np.diag([1.0, -1.0]))


def test_generators_are_deterministic():
    a = wi.gen_positive_definite(4, 123)
    b = wi.gen_positive_definite(4, 123)
    np.testing.assert_array_equal(a.numpy(), b.numpy())
    ds = wi.gen_doubly_stochastic(5, 9).numpy()
    np.testing.assert_allclose(ds.sum(axis=0), np.ones(5), atol=1e-11)
    np.testing.assert_allclose(ds.sum(axis=1), np.ones(5), atol=1e-11)
    assert wi.is_doubly_stochastic(ds, 1e-10)


def test_two_sides_spot_value():
    lhs, rhs = wi.t010_sides(np.diag([0.1, 0.2]))
    assert lhs == pytest.approx(0.2808128, abs=1e-6)
    u = math.sqrt(0.05)
    assert rhs == pytest.approx(6.0 * (math.sqrt(2.0) - 0.5) * (u + u * u), abs=1e-13)


def test_sandwich_hand_example():
    sides = wi.t0_sides(np.eye(2), 2.25 * np.eye(2), "floor_t1")
    assert sides["m"] == 2
    assert sides["middle"] == pytest.approx(4.0 / 3.0, abs=1e-13)
    assert sides["lower"] > sides["middle"]  # the stated lower bound fails here
    assert sides["middle"] <= sides["upper"]


def test_harmonic_bounds():
    b = wi.harmonic_inv_sqrt_bounds(4)
    assert b["sum_inv_sqrt"] == pytest.approx(2.7844570503761731, abs=1e-13)
    w = wi.weighted_harmonic_bounds([1.0, 1.0, 1.0, 1.0])
    assert w["lower_statement"] == pytest.approx(1.0 / 30.0, abs=1e-15)
    assert w["lower_proof"] == pytest.approx(1.0 / 7.5, abs=1e-15)
    assert w["upper"] == pytest.approx(12.0, abs=1e-12)
    min_margin, violations = wi.sweep_inv_sqrt_bounds(2, 10000)
    assert violations == 0 and min_margin > 0.0


def test_run_audit_and_report():
    report = wi.run_audit("t010", dim_lo=2, dim_hi=4, trials=50, seed=42)
    assert report.check_name == "t010"
    assert not report.violations
    assert report.min_margin is not None and report.min_margin > 0.0
    assert len(report.results) == 3
    assert report.results[0].dim == 2 and report.results[0].trials == 50

    text = wi.report_to_json(report, [("check", "t010")], 1700000000)
    doc = json.loads(text)
    assert doc["summary"]["verdict"] == "pass"
    assert doc["tool_version"] == "warpineq 0.1.0"

    again = wi.run_audit("t010", dim_lo=2, dim_hi=4, trials=50, seed=42)
    assert wi.report_to_json(again, [("check", "t010")], 1700000000) == text


def test_run_audit_rejects_unknown_checks():
    with pytest.raises(ValueError):
        wi.run_audit("nope")


def test_registered_checks():
    names = wi.registered_checks()
    assert "t010" in names and "sqrt-sum-chain" in names
    assert len(names) == 13


def test_geometry_audit():
    assert set(wi.geometry_models()) == {"flat-product", "chen-cone", "circle-fiber"}
    run = wi.geometry_audit("flat-product", grid=2)
    assert run["verdict"] == "equality"
    assert run["cr_residuals"]["dt_invariance"] < 1e-7
    assert run["h_xi_xi"] < 1e-8
    assert "equality_diagnostics" in run

    strict = wi.geometry_audit("circle-fiber", grid=2)
    assert strict["verdict"] == "strict"
    assert strict["min_margin"] == pytest.approx(1.0, abs=1e-6)

    with pytest.raises(ValueError):
        wi.geometry_audit("no-such-model")


def test_matrix_file_round_trip(tmp_path):
    path = str(tmp_path / "m.mat")
    a = np.array([[1.5, -2.25], [1e-8, 4.0]])
    wi.save_matrix_text(path, a)
    back = wi.load_matrix_text(path).numpy()
    np.testing.assert_array_equal(back, a)

    bad = tmp_path / "bad.mat"
    bad.write_text("2 2\n1 nan\n0 1\n")
    with pytest.raises(ValueError):
        wi.load_matrix_text(str(bad))
