"""Bifurcation branches and degenerate solutions of the Jacobi-weighted
Lane-Emden problem on [-1, 1]."""

import json

from . import _core
from ._core import JbifError, eval_jacobi, gauss_jacobi, lambda_prime_zero, verify

__version__ = _core.__version__

__all__ = [
    "JbifError",
    "eval_jacobi",
    "gauss_jacobi",
    "lambda_prime_zero",
    "verify",
    "sphere",
    "linearize",
    "trace",
    "find_degenerate",
]


def sphere(n, d, c, q=None, kmax=4, m=None):
    """Jacobi exponents, eigenvalues and bifurcation values for sphere data."""
    return json.loads(_core.sphere_json(n, d, c, None if q is None else str(q), kmax, m))


def linearize(k, alpha, beta):
    """Coefficients of P_k^2 in the P_i basis. String exponents ("3/2") use exact arithmetic too."""
    return json.loads(_core.linearize_json(k, alpha, beta))


def trace(k, alpha, beta, q, modes=64, s0=1e-3, direction=1, max_steps=400, ds_max=0.05, ds_initial=1e-3):
    """Continue the branch leaving (1, lambda_k) along direction * P_k."""
    return json.loads(
        _core.trace_json(k, alpha, beta, q, modes, s0, direction, max_steps, ds_max, ds_initial)
    )


def find_degenerate(k, alpha, beta, q, modes=64):
    """Trace to the first fold; the fold record is in result["folds"][0]."""
    return json.loads(_core.find_degenerate_json(k, alpha, beta, q, modes))
