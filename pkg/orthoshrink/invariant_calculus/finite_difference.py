"""
Finite-difference oracles over observation space.

These are the ground truth the analytic formulas are verified against.
A centered-difference approximation is used throughout.
"""
from __future__ import annotations

import logging
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from ..exceptions import NumericError
from ..spectral import as_observation

logger = logging.getLogger(__name__)

ScalarField = Callable[[NDArray[np.float64]], float]
MatrixMap = Callable[[NDArray[np.float64]], NDArray[np.float64]]

FIRST_ORDER_STEP = 1e-5
SECOND_ORDER_STEP = 1e-4


def _evaluate(f, X):
    value = f(X)
    if not np.all(np.isfinite(value)):
        raise NumericError(f"non-finite value {value!r} during finite differencing")
    return value


def _check_step(step: float) -> None:
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")


def fd_gradient(X, f: ScalarField, step: float = FIRST_ORDER_STEP) -> NDArray[np.float64]:
    """
    Central-difference matrix gradient of a scalar field

    Args:
        X: n×p observation
        f (callable): Scalar field over n×p matrices
        step (float): Perturbation size

    Returns:
        np.ndarray: n×p matrix of ∂f/∂X_{ai}
    """
    _check_step(step)
    X = as_observation(X)
    grad = np.zeros_like(X)
    for a, i in np.ndindex(X.shape):
        up = X.copy()
        up[a, i] += step
        down = X.copy()
        down[a, i] -= step
        grad[a, i] = (_evaluate(f, up) - _evaluate(f, down)) / (2 * step)
    return grad


def fd_matrix_derivative(X, F: MatrixMap, a: int, i: int, step: float = FIRST_ORDER_STEP) -> NDArray[np.float64]:
    """Central difference of a matrix-valued map in the entry X_{ai} (1-based)."""
    _check_step(step)
    X = as_observation(X)
    up = X.copy()
    up[a - 1, i - 1] += step
    down = X.copy()
    down[a - 1, i - 1] -= step
    return (_evaluate(F, up) - _evaluate(F, down)) / (2 * step)


def fd_matrix_laplacian(X, f: ScalarField, step: float = SECOND_ORDER_STEP) -> NDArray[np.float64]:
    """
    Matrix Laplacian (Δ̃f)_{ij} = Σₐ ∂²f/∂X_{ai}∂X_{aj} by nested central
    differences: 3-point stencil on the diagonal, 4-point off it.
    """
    _check_step(step)
    X = as_observation(X)
    n, p = X.shape
    f0 = _evaluate(f, X)
    out = np.zeros((p, p))

    def shifted(a, moves):
        Y = X.copy()
        for i, sign in moves:
            Y[a, i] += sign * step
        return _evaluate(f, Y)

    for a in range(n):
        for i in range(p):
            out[i, i] += (shifted(a, [(i, 1)]) - 2.0 * f0 + shifted(a, [(i, -1)])) / step ** 2
            for j in range(i + 1, p):
                mixed = (shifted(a, [(i, 1), (j, 1)]) - shifted(a, [(i, 1), (j, -1)])
                         - shifted(a, [(i, -1), (j, 1)]) + shifted(a, [(i, -1), (j, -1)]))
                out[i, j] += mixed / (4.0 * step ** 2)
    upper = np.triu(out, 1)
    return np.diag(np.diag(out)) + upper + upper.T


def fd_matrix_divergence(X, g: MatrixMap, step: float = FIRST_ORDER_STEP) -> NDArray[np.float64]:
    """
    Matrix divergence (diṽ g)_{ij} = Σₐ ∂g_{aj}/∂X_{ai} of an n×p → n×p map.
    """
    _check_step(step)
    X = as_observation(X)
    n, p = X.shape
    div = np.zeros((p, p))
    for a, i in np.ndindex(n, p):
        up = X.copy()
        up[a, i] += step
        down = X.copy()
        down[a, i] -= step
        div[i, :] += (_evaluate(g, up)[a, :] - _evaluate(g, down)[a, :]) / (2 * step)
    logger.debug("fd divergence on %sx%s observation, step %g", n, p, step)
    return div
