"""Analytic matrix derivatives of orthogonally invariant functions"""
from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from ..exceptions import DegenerateSpectrumError
from ..spectral import (
    DEFAULT_REL_TOL,
    SpectralPair,
    eigen_gap_check,
    gap_mask,
    gram_spectral,
    pairwise_inverse_gaps
)
from .objectives import InvariantObjective


def _spectrum(X, sp: SpectralPair | None) -> SpectralPair:
    return sp if sp is not None else gram_spectral(X)


def _checked_spectrum(X, sp: SpectralPair | None, obj: InvariantObjective | None = None) -> SpectralPair:
    """Spectral pair with distinct eigenvalues; also positive ones for singular objectives."""
    sp = _spectrum(X, sp)
    sp.require_gap(require_positive=obj is None or obj.singular)
    return sp


def _check_index(i: int, upper: int, name: str) -> None:
    if not 1 <= i <= upper:
        raise IndexError(f"{name}={i} out of range 1..{upper}")


def lambda_gradient(X, sp: SpectralPair | None, i: int) -> NDArray[np.float64]:
    """
    Matrix gradient of the i-th eigenvalue of XᵀX: 2 X vᵢ vᵢᵀ

    Args:
        X: n×p observation
        sp (SpectralPair): Decomposition of XᵀX, computed when None
        i (int): 1-based eigenvalue index

    Returns:
        np.ndarray: n×p matrix field
    """
    sp = _spectrum(X, sp)
    _check_index(i, sp.p, 'i')
    return 2.0 * np.asarray(X) @ sp.projector(i)


def eigenvector_derivative(X, sp: SpectralPair | None, j: int, a: int, k: int) -> NDArray[np.float64]:
    """
    ∂vⱼ/∂X_{ak} from the eigenvector perturbation formula (1-based indices).

    The column sign of vⱼ is arbitrary, so only products with vⱼ are
    meaningful to callers.
    """
    sp = _spectrum(X, sp)
    sp.require_gap(require_positive=False)
    X = np.asarray(X)
    n, p = X.shape
    _check_index(j, p, 'j')
    _check_index(a, n, 'a')
    _check_index(k, p, 'k')
    V = sp.eigenvectors
    XV = X @ V
    W = pairwise_inverse_gaps(sp.eigenvalues)
    jj, aa, kk = j - 1, a - 1, k - 1
    coef = (XV[aa, jj] * V[kk, :] + XV[aa, :] * V[kk, jj]) * W[jj, :]
    return V @ coef


def projector_jacobian(X, sp: SpectralPair | None, j: int, a: int, k: int) -> NDArray[np.float64]:
    """∂(vⱼvⱼᵀ)/∂X_{ak}, a symmetric traceless p×p matrix (1-based indices)."""
    sp = _spectrum(X, sp)
    dv = eigenvector_derivative(X, sp, j, a, k)
    v = sp.eigenvectors[:, j - 1]
    return np.outer(dv, v) + np.outer(v, dv)


def matrix_gradient_invariant(X, obj: InvariantObjective, sp: SpectralPair | None = None) -> NDArray[np.float64]:
    """
    Matrix gradient of h(X) = H(λ): 2 Σᵢ (∂H/∂λᵢ) X vᵢvᵢᵀ

    Args:
        X: n×p observation (or a stack of them)
        obj (InvariantObjective): H and its partials
        sp (SpectralPair, optional): Precomputed decomposition of XᵀX

    Returns:
        np.ndarray: Gradient with the shape of X

    Raises:
        DegenerateSpectrumError: Coinciding eigenvalues, or λ_p ≈ 0 for a
            singular objective
    """
    sp = _checked_spectrum(X, sp, obj)
    V = sp.eigenvectors
    g = obj.grad(sp.eigenvalues)
    return 2.0 * np.asarray(X) @ ((V * g[..., None, :]) @ np.swapaxes(V, -1, -2))


def gradient_gram(X, obj: InvariantObjective, sp: SpectralPair | None = None) -> NDArray[np.float64]:
    """(∇̃h)ᵀ(∇̃h) = V diag(4λₖ(∂H/∂λₖ)²) Vᵀ."""
    sp = _checked_spectrum(X, sp, obj)
    lam = sp.eigenvalues
    return sp.conjugate(4.0 * lam * obj.grad(lam) ** 2)


def laplacian_diagonal(lam, grad, hess, n: int) -> NDArray[np.float64]:
    """
    Diagonal D of the matrix Laplacian V D Vᵀ:
    4λₖH''ₖ + 2nH'ₖ + 2 Σ_{l≠k} λₗ/(λₖ−λₗ) (H'ₖ − H'ₗ)
    """
    W = pairwise_inverse_gaps(lam)
    lam_w = np.einsum('...kl,...l->...k', W, lam)
    lam_g_w = np.einsum('...kl,...l->...k', W, lam * grad)
    return 4.0 * lam * hess + 2.0 * n * grad + 2.0 * (grad * lam_w - lam_g_w)


def matrix_laplacian_invariant(X, obj: InvariantObjective, sp: SpectralPair | None = None) -> NDArray[np.float64]:
    """Matrix Laplacian Δ̃h of h(X) = H(λ), a symmetric p×p field."""
    sp = _checked_spectrum(X, sp, obj)
    lam = sp.eigenvalues
    n = np.shape(X)[-2]
    return sp.conjugate(laplacian_diagonal(lam, obj.grad(lam), obj.hess_diag(lam), n))


def scalar_laplacian_invariant(X, obj: InvariantObjective, sp: SpectralPair | None = None):
    """
    Ordinary Laplacian Δh, in the reduced form
    4Σλₖ H''ₖ + 2Σ (n−p+1 + 2λₖ Σ_{l≠k} 1/(λₖ−λₗ)) H'ₖ
    """
    sp = _checked_spectrum(X, sp, obj)
    lam = sp.eigenvalues
    n, p = np.shape(X)[-2:]
    grad = obj.grad(lam)
    inv_sum = np.sum(pairwise_inverse_gaps(lam), axis=-1)
    return (4.0 * np.sum(lam * obj.hess_diag(lam), axis=-1)
            + 2.0 * np.sum((n - p + 1 + 2.0 * lam * inv_sum) * grad, axis=-1))


def lambda_pair_identity(lam) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Both sides of Σ_{l≠k}(λₖ+λₗ)/(λₖ−λₗ) = 2λₖ Σ_{l≠k} 1/(λₖ−λₗ) − p + 1

    Args:
        lam: Spectrum (..., p) of distinct values, any order

    Returns:
        tuple: (lhs, rhs), each of shape (..., p)
    """
    lam = np.asarray(lam, dtype=np.float64)
    ordered = -np.sort(-lam, axis=-1)
    mask = np.atleast_1d(gap_mask(ordered, DEFAULT_REL_TOL, require_positive=False)).ravel()
    if not mask.all():
        bad = ordered.reshape(-1, lam.shape[-1])[int(np.argmin(mask))]
        raise DegenerateSpectrumError(eigen_gap_check(bad, DEFAULT_REL_TOL, require_positive=False))
    p = lam.shape[-1]
    W = pairwise_inverse_gaps(lam)
    inv_sum = np.sum(W, axis=-1)
    lhs = lam * inv_sum + np.einsum('...kl,...l->...k', W, lam)
    rhs = 2.0 * lam * inv_sum - p + 1
    return lhs, rhs
