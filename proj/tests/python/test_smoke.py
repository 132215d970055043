import math

import pytest

import jacobi_bif as jb


def test_sphere_table():
    out = jb.sphere(3, 1, 0, q=3, kmax=2)
    assert out["alpha"] == "1/2" and out["beta"] == "1/2"
    assert [p["lambda"] for p in out["bifurcation_points"]] == ["3/2", "4"]


def test_invalid_degree():
    with pytest.raises(jb.JbifError, match="invalid-degree"):
        jb.sphere(3, 5, 0)


def test_linearize_exact():
    out = jb.linearize(2, "0", "0")
    assert out["coeffs_exact"] == ["1/5", "0", "2/7", "0", "18/35"]
    assert out["i3"] == pytest.approx(4 / 35, rel=1e-13)


def test_linearize_float_params():
    out = jb.linearize(3, 0.25, 0.25)
    assert "coeffs_exact" not in out
    assert out["discrepancies"] == []


def test_quadrature():
    nodes, weights = jb.gauss_jacobi(0.5, 0.5, 12)
    assert len(nodes) == 12
    assert sum(weights) == pytest.approx(math.pi / 2, rel=1e-14)
    assert jb.eval_jacobi(2, 0.0, 0.0, 0.3) == pytest.approx(-0.365, rel=1e-14)


def test_slope():
    assert jb.lambda_prime_zero(1, "1", "0", 2.0) == pytest.approx(-1.2, rel=1e-12)


def test_trace_and_fold():
    branch = jb.trace(1, "1", "0", 2.0, modes=16, max_steps=5)
    assert len(branch["points"]) == 6
    assert branch["spec"]["N"] == 16
    fold = jb.find_degenerate(1, "1", "0", 2.0)["folds"][0]
    assert 0 < fold["lambda_star"] < 3
    assert fold["crossings"] == 1
    assert fold["critical_points"] == 0


def test_parity_rejected():
    with pytest.raises(jb.JbifError, match="parity-violation"):
        jb.find_degenerate(1, "1/2", "1/2", 3.0)


def test_verify_suite():
    results = jb.verify("quartic")
    assert [r["id"] for r in results] == [4]
    assert all(r["passed"] for r in results)
