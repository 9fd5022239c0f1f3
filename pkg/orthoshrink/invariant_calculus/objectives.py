"""Orthogonally invariant objectives h(X) = H(λ)"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

# Callables map a spectrum of shape (..., p) to a value of shape (...) or
# partials of shape (..., p). They must be stateless.
SpectrumFn = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True)
class InvariantObjective:
    """
    H(λ) with its first partials and diagonal second partials.

    Cross partials ∂²H/∂λₖ∂λₗ never enter the matrix Laplacian, so they are
    not part of the contract. `singular` marks objectives with 1/λ terms,
    which additionally require λ_p to clear the degeneracy threshold.
    """

    value: SpectrumFn
    grad: SpectrumFn
    hess_diag: SpectrumFn
    label: str
    singular: bool = False


def zero_objective() -> InvariantObjective:
    """H ≡ 0 (the maximum likelihood estimator)."""
    return InvariantObjective(
        value=lambda lam: np.zeros(np.shape(lam)[:-1]),
        grad=lambda lam: np.zeros(np.shape(lam)),
        hess_diag=lambda lam: np.zeros(np.shape(lam)),
        label='zero'
    )


def trace_objective() -> InvariantObjective:
    """H = Σλₖ, i.e. h(X) = ‖X‖²_F."""
    return InvariantObjective(
        value=lambda lam: np.sum(lam, axis=-1),
        grad=lambda lam: np.ones(np.shape(lam)),
        hess_diag=lambda lam: np.zeros(np.shape(lam)),
        label='trace'
    )


def log_det_objective(coef: float) -> InvariantObjective:
    """H = coef · Σ log λₖ = coef · log det XᵀX."""
    coef = float(coef)
    return InvariantObjective(
        value=lambda lam: coef * np.sum(np.log(lam), axis=-1),
        grad=lambda lam: coef / np.asarray(lam),
        hess_diag=lambda lam: -coef / np.asarray(lam) ** 2,
        label=f"logdet({coef:g})",
        singular=True
    )


def polynomial_objective(coefficients) -> InvariantObjective:
    """
    Separable polynomial H(λ) = Σₖ Σ_d a[k, d-1] λₖ^d

    Args:
        coefficients: (p, degree) array; column d-1 multiplies λₖ^d

    Returns:
        InvariantObjective: smooth objective with exact partials
    """
    a = np.array(coefficients, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("coefficients must be a (p, degree) array")
    a.setflags(write=False)
    powers = np.arange(1, a.shape[1] + 1, dtype=np.float64)

    def value(lam):
        lam = np.asarray(lam)
        return np.sum(a * lam[..., None] ** powers, axis=(-2, -1))

    def grad(lam):
        lam = np.asarray(lam)
        return np.sum(a * powers * lam[..., None] ** (powers - 1), axis=-1)

    def hess_diag(lam):
        lam = np.asarray(lam)
        safe = np.where(powers >= 2, powers - 2, 0.0)
        return np.sum(a * powers * (powers - 1) * lam[..., None] ** safe, axis=-1)

    return InvariantObjective(value, grad, hess_diag, label=f"poly(deg={a.shape[1]})")


def check_objective_consistency(obj: InvariantObjective, lam, step: float = 1e-6) -> tuple[float, float]:
    """
    Compare grad and hess_diag against 1-D central differences in λ

    Args:
        obj (InvariantObjective): Objective under test
        lam: Length-p spectrum at which to compare
        step (float): Relative step (scaled by |λₖ|)

    Returns:
        tuple: (max relative grad error, max relative hess_diag error)
    """
    lam = np.asarray(lam, dtype=np.float64)
    fd_grad = np.empty_like(lam)
    fd_hess = np.empty_like(lam)
    for k in range(lam.size):
        h = step * max(abs(lam[k]), 1.0e-3)
        up, down = lam.copy(), lam.copy()
        up[k] += h
        down[k] -= h
        fd_grad[k] = (obj.value(up) - obj.value(down)) / (2 * h)
        fd_hess[k] = (obj.grad(up)[k] - obj.grad(down)[k]) / (2 * h)

    def rel(a, b):
        scale = max(float(np.max(np.abs(b))), 1e-300)
        return float(np.max(np.abs(a - b))) / scale

    grad_err = rel(fd_grad, obj.grad(lam)) if np.any(obj.grad(lam)) else float(np.max(np.abs(fd_grad)))
    hess_err = rel(fd_hess, obj.hess_diag(lam)) if np.any(obj.hess_diag(lam)) else float(np.max(np.abs(fd_hess)))
    return grad_err, hess_err
