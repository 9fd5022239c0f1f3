"""
Unbiased estimates of the matrix quadratic risk.

Every SURE here has the form n·I_p + V D Vᵀ: pairwise sums are evaluated
as a diagonal in the eigenbasis of XᵀX and conjugated once. The noise
variance is fixed at 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..estimators import EstimatorSpec, ShrinkageCoefficients, efron_morris_coeffs, log_objective, stein_coeffs
from ..exceptions import InvalidDimensionsError, NumericError
from ..invariant_calculus import InvariantObjective, fd_matrix_divergence
from ..spectral import ProblemDims, SpectralPair, as_observation, gram_spectral, pairwise_inverse_gaps, thin_svd

DIVERGENCE_STEP = 1e-5
KINK_FACTOR = 10.0


@dataclass(frozen=True)
class RiskDiagonal:
    """Diagonal D of V D Vᵀ, aligned with descending λ."""

    d: NDArray[np.float64]

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.d)):
            raise NumericError("risk diagonal has non-finite entries")


@dataclass(frozen=True)
class SureMatrix:
    """
    Per-sample unbiased estimate of E[(M̂−M)ᵀ(M̂−M)].

    `near_kink` is set by the numeric divergence when a positive-part
    estimator sits close to its clipping boundary.
    """

    entries: NDArray[np.float64]
    diagonal: RiskDiagonal | None = None
    near_kink: bool = False

    @property
    def frobenius(self) -> float:
        return float(np.trace(self.entries))

    def eigenvalues(self) -> NDArray[np.float64]:
        """Eigenvalues of the SURE matrix, descending."""
        return np.linalg.eigvalsh(self.entries)[::-1]


def largest_eigenvalue(S) -> float:
    """Largest eigenvalue of a symmetric matrix (Löwner-order checks)."""
    S = np.asarray(S, dtype=np.float64)
    return float(np.linalg.eigvalsh(0.5 * (S + S.T))[-1])


def _dims_for(X, dims: ProblemDims | None) -> ProblemDims:
    actual = ProblemDims.of(X)
    if dims is not None and dims != actual:
        raise InvalidDimensionsError(f"observation is {actual}, dims say {dims}")
    return actual


def assemble_sure(sp: SpectralPair, d, n: int) -> NDArray[np.float64]:
    """n·I_p + V diag(d) Vᵀ, for one spectrum or a stack."""
    return n * np.eye(sp.p) + sp.conjugate(d)


def general_risk_diagonal(lam, grad, hess, n: int) -> NDArray[np.float64]:
    """
    4(2λₖH''ₖ + nH'ₖ + λₖH'ₖ² + Σ_{l≠k} λₗ/(λₖ−λₗ)(H'ₖ − H'ₗ))
    """
    W = pairwise_inverse_gaps(lam)
    lam_w = np.einsum('...kl,...l->...k', W, lam)
    lam_g_w = np.einsum('...kl,...l->...k', W, lam * grad)
    pairwise = grad * lam_w - lam_g_w
    return 4.0 * (2.0 * lam * hess + n * grad + lam * grad ** 2 + pairwise)


def shrinkage_risk_diagonal(lam, c, n: int) -> NDArray[np.float64]:
    """
    (1/λₖ)cₖ(cₖ−2n+4) − (2/λₖ) Σ_{l≠k} (cₖλₗ − cₗλₖ)/(λₖ−λₗ)
    """
    lam = np.asarray(lam, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    W = pairwise_inverse_gaps(lam)
    cross = c * np.einsum('...kl,...l->...k', W, lam) - lam * np.einsum('...kl,l->...k', W, c)
    return (c * (c - 2.0 * n + 4.0) - 2.0 * cross) / lam


def stein_risk_diagonal(lam, n: int) -> NDArray[np.float64]:
    """
    −(1/λₖ)(n+p−2k−1)(n−3p+2k−1) + 4 Σ_{l≠k} (k−l)/(λₖ−λₗ)
    """
    lam = np.asarray(lam, dtype=np.float64)
    p = lam.shape[-1]
    k = np.arange(1, p + 1, dtype=np.float64)
    W = pairwise_inverse_gaps(lam)
    index_gap = k[:, None] - k[None, :]
    return -(n + p - 2.0 * k - 1.0) * (n - 3.0 * p + 2.0 * k - 1.0) / lam + 4.0 * np.sum(index_gap * W, axis=-1)


def _checked(X, obj: InvariantObjective | None = None) -> SpectralPair:
    sp = gram_spectral(X)
    sp.require_gap(require_positive=obj is None or obj.singular)
    return sp


def sure_matrix_general(X, obj: InvariantObjective, dims: ProblemDims | None = None) -> SureMatrix:
    """
    SURE of M̂ = X + ∇̃h(X) for an invariant h(X) = H(λ)

    Args:
        X: n×p observation
        obj (InvariantObjective): H with first and diagonal second partials
        dims (ProblemDims, optional): Must match X when given

    Returns:
        SureMatrix: n·I_p + V D Vᵀ

    Raises:
        DegenerateSpectrumError: Coinciding eigenvalues, or λ_p ≈ 0 for
            singular objectives
    """
    dims = _dims_for(X, dims)
    sp = _checked(X, obj)
    lam = sp.eigenvalues
    d = general_risk_diagonal(lam, obj.grad(lam), obj.hess_diag(lam), dims.n)
    return SureMatrix(assemble_sure(sp, d, dims.n), RiskDiagonal(d))


def sure_matrix_shrinkage(X, c, dims: ProblemDims | None = None) -> SureMatrix:
    """SURE of the spectral shrinkage estimator with coefficients c."""
    dims = _dims_for(X, dims)
    c = c if isinstance(c, ShrinkageCoefficients) else ShrinkageCoefficients(c)
    c.check_dims(dims)
    sp = _checked(X)
    d = shrinkage_risk_diagonal(sp.eigenvalues, c.c, dims.n)
    return SureMatrix(assemble_sure(sp, d, dims.n), RiskDiagonal(d))


def sure_matrix_stein(X, dims: ProblemDims | None = None) -> SureMatrix:
    """SURE of Stein's estimator (cₖ = n+p−2k−1) in its simplified form."""
    dims = _dims_for(X, dims)
    stein_coeffs(dims)
    sp = _checked(X)
    d = stein_risk_diagonal(sp.eigenvalues, dims.n)
    return SureMatrix(assemble_sure(sp, d, dims.n), RiskDiagonal(d))


def sure_frobenius(X, obj: InvariantObjective, dims: ProblemDims | None = None, form: str = 'reduced') -> float:
    """
    Unbiased estimate of the Frobenius risk E‖M̂−M‖²_F

    Args:
        X: n×p observation
        obj (InvariantObjective): Objective of the pseudo-Bayes estimator
        dims (ProblemDims, optional): Must match X when given
        form (str): 'pairwise' uses Σ(λₖ+λₗ)/(λₖ−λₗ); 'reduced' uses
            2λₖΣ1/(λₖ−λₗ) − p + 1

    Returns:
        float: Scalar SURE, equal to the trace of sure_matrix_general
            (an array of them for a stack)
    """
    dims = _dims_for(X, dims)
    sp = _checked(X, obj)
    lam = sp.eigenvalues
    g, h = obj.grad(lam), obj.hess_diag(lam)
    W = pairwise_inverse_gaps(lam)
    if form == 'pairwise':
        weights = lam * W.sum(axis=-1) + np.einsum('...kl,...l->...k', W, lam)
    elif form == 'reduced':
        weights = 2.0 * lam * W.sum(axis=-1) - dims.p + 1
    else:
        raise ValueError(f"form must be 'pairwise' or 'reduced', got '{form}'")
    local = 2.0 * lam * h + dims.n * g + lam * g ** 2
    total = dims.n * dims.p + 4.0 * np.sum(local + g * weights, axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def kink_proximity(X, c, step: float = DIVERGENCE_STEP) -> bool:
    """Whether some σₖ satisfies |σₖ² − cₖ| < 10·step·σₖ."""
    sigma = thin_svd(X).singular_values
    c = np.asarray(c.c if isinstance(c, ShrinkageCoefficients) else c, dtype=np.float64)
    return bool(np.any(np.abs(sigma ** 2 - c) < KINK_FACTOR * step * sigma))


def divergence_sure_numeric(X, estimator: EstimatorSpec, dims: ProblemDims | None = None,
                            step: float = DIVERGENCE_STEP) -> SureMatrix:
    """
    SURE n·I_p + diṽg + (diṽg)ᵀ + gᵀg with g = M̂ − X and the divergence
    taken by central differences

    Args:
        X: n×p observation
        estimator (EstimatorSpec): Any estimator in the zoo
        dims (ProblemDims, optional): Must match X when given
        step (float): Finite-difference step

    Returns:
        SureMatrix: Numeric SURE; near_kink flags positive-part estimators
            whose clipping boundary lies within the stencil
    """
    X = as_observation(X)
    dims = _dims_for(X, dims)

    def g(Y):
        return estimator.apply(Y) - Y

    residual = g(X)
    if not np.all(np.isfinite(residual)):
        raise NumericError(f"estimator '{estimator.label}' produced non-finite output")
    div = fd_matrix_divergence(X, g, step)
    entries = dims.n * np.eye(dims.p) + div + div.T + residual.T @ residual
    near_kink = estimator.is_positive_part and kink_proximity(X, estimator.coefficients, step)
    return SureMatrix(0.5 * (entries + entries.T), near_kink=near_kink)


def em_zero_mean_exact_risk(dims: ProblemDims) -> NDArray[np.float64]:
    """
    Exact risk of the Efron-Morris estimator at M = 0: (p+1)·I_p, from
    E[(XᵀX)⁻¹] = I_p/(n−p−1) for a central Wishart matrix.
    """
    c = efron_morris_coeffs(dims).c[0]
    # E[M̂ᵀM̂] = E[XᵀX] − 2c·I + c²·E[(XᵀX)⁻¹]
    return (dims.n - 2.0 * c + c ** 2 / (dims.n - dims.p - 1)) * np.eye(dims.p)


def efron_morris_objective(dims: ProblemDims) -> InvariantObjective:
    """H = −½(n−p−1) Σ log λₖ."""
    return log_objective(efron_morris_coeffs(dims))
