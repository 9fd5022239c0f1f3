"""Canonical decompositions of the observation matrix"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..exceptions import DegenerateSpectrumError, InvalidDimensionsError, NumericError

# An observation is an n×p float array; every function here also accepts a
# stack of observations with shape (..., n, p).
Observation = NDArray[np.float64]

DEFAULT_REL_TOL = 1e-8
EPS_ABS = 1e-300


@dataclass(frozen=True, slots=True)
class ProblemDims:
    """Shape of the observation matrix (tall-or-square, n ≥ p)."""

    n: int
    p: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.p < 1:
            raise InvalidDimensionsError(f"n and p must be positive, got n={self.n}, p={self.p}")
        if self.n < self.p:
            raise InvalidDimensionsError(f"expected n >= p, got n={self.n}, p={self.p}")

    @classmethod
    def of(cls, X: Observation) -> 'ProblemDims':
        """Dimensions of an observation (or of each member of a stack)."""
        n, p = np.shape(X)[-2:]
        return cls(int(n), int(p))

    def __str__(self) -> str:
        return f"{self.n}x{self.p}"


@dataclass(frozen=True, slots=True)
class GapCheck:
    """
    Outcome of eigen_gap_check.

    Indices are 1-based, matching λ₁ ≥ … ≥ λ_p.
    """

    ok: bool
    pair: tuple[int, int] | None = None
    index: int | None = None
    min_relative_gap: float = float('inf')

    def describe(self) -> str:
        if self.ok:
            return 'ok'
        if self.pair is not None:
            return f"eigenvalues {self.pair[0]} and {self.pair[1]} coincide (relative gap {self.min_relative_gap:.3g})"
        return f"eigenvalue {self.index} is numerically zero"


@dataclass(frozen=True, slots=True)
class SpectralPair:
    """Eigenvalues (descending) and eigenvectors of XᵀX."""

    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]
    gap_tolerance: float = DEFAULT_REL_TOL

    @property
    def p(self) -> int:
        return self.eigenvalues.shape[-1]

    def gap_check(self) -> GapCheck:
        return eigen_gap_check(self.eigenvalues, self.gap_tolerance)

    def require_gap(self, require_positive: bool = True) -> None:
        """
        Raise DegenerateSpectrumError unless every member of the (possibly
        stacked) spectrum passes the gap check.
        """
        mask = np.atleast_1d(gap_mask(self.eigenvalues, self.gap_tolerance,
                                      require_positive=require_positive)).ravel()
        if mask.all():
            return
        first = int(np.argmin(mask))
        lam = self.eigenvalues.reshape(-1, self.p)[first]
        raise DegenerateSpectrumError(
            eigen_gap_check(lam, self.gap_tolerance, require_positive=require_positive))

    def projector(self, j: int) -> NDArray[np.float64]:
        """vⱼvⱼᵀ for the 1-based index j."""
        v = self.eigenvectors[..., :, j - 1]
        return v[..., :, None] * v[..., None, :]

    def conjugate(self, d: NDArray[np.float64]) -> NDArray[np.float64]:
        """V diag(d) Vᵀ, symmetrized."""
        V = self.eigenvectors
        out = (V * d[..., None, :]) @ np.swapaxes(V, -1, -2)
        return 0.5 * (out + np.swapaxes(out, -1, -2))


@dataclass(frozen=True, slots=True)
class SvdTriple:
    """Thin singular value decomposition X = U diag(σ) Vᵀ."""

    left: NDArray[np.float64]
    singular_values: NDArray[np.float64]
    right: NDArray[np.float64]

    def compose(self, values: NDArray[np.float64]) -> NDArray[np.float64]:
        """U diag(values) Vᵀ with the singular vectors of this triple."""
        return (self.left * values[..., None, :]) @ np.swapaxes(self.right, -1, -2)


def as_observation(X) -> Observation:
    """
    Coerce to a float64 observation array and reject non-finite entries

    Args:
        X: n×p matrix or stack of matrices

    Returns:
        np.ndarray: float64 copy-free view when possible

    Raises:
        NumericError: If X is not at least 2-D or has non-finite entries
        InvalidDimensionsError: If n < p
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim < 2:
        raise NumericError(f"observation must be a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericError("observation has non-finite entries")
    ProblemDims.of(arr)
    return arr


def gram_spectral(X: Observation, gap_tolerance: float = DEFAULT_REL_TOL) -> SpectralPair:
    """
    Spectral decomposition of XᵀX with eigenvalues sorted descending.

    No sign convention is imposed on eigenvector columns; downstream code
    only uses sign-invariant quantities.
    """
    arr = as_observation(X)
    gram = np.swapaxes(arr, -1, -2) @ arr
    try:
        w, v = np.linalg.eigh(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigendecomposition failed: {exc}") from exc
    lam = np.maximum(w[..., ::-1], 0.0)
    return SpectralPair(np.ascontiguousarray(lam), np.ascontiguousarray(v[..., :, ::-1]), gap_tolerance)


def thin_svd(X: Observation) -> SvdTriple:
    """Thin SVD with singular values descending (LAPACK order)."""
    arr = as_observation(X)
    try:
        u, s, vt = np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc
    return SvdTriple(u, s, np.swapaxes(vt, -1, -2))


def eigen_gap_check(lam, rel_tol: float = DEFAULT_REL_TOL, eps_abs: float = EPS_ABS,
                    require_positive: bool = True) -> GapCheck:
    """
    Check that a descending spectrum has distinct and (optionally) positive
    eigenvalues, relative to the largest one.

    Args:
        lam: Length-p eigenvalue vector, sorted descending
        rel_tol (float): Relative tolerance on gaps and on λ_p
        eps_abs (float): Floor for the scale max(λ₁, eps_abs)
        require_positive (bool): Also treat a near-zero λ_p as degenerate

    Returns:
        GapCheck: ok, or the first offending pair / index (1-based)
    """
    lam = np.asarray(lam, dtype=np.float64)
    scale = max(float(lam[0]), eps_abs)
    gaps = (lam[:-1] - lam[1:]) / scale
    min_gap = float(gaps.min()) if gaps.size else float('inf')
    if gaps.size and min_gap <= rel_tol:
        k = int(np.argmin(gaps))
        return GapCheck(False, pair=(k + 1, k + 2), min_relative_gap=min_gap)
    if require_positive and lam[-1] / scale <= rel_tol:
        return GapCheck(False, index=lam.size, min_relative_gap=min_gap)
    return GapCheck(True, min_relative_gap=min_gap)


def gap_mask(lam, rel_tol: float = DEFAULT_REL_TOL, eps_abs: float = EPS_ABS,
             require_positive: bool = True) -> NDArray[np.bool_]:
    """Vectorized eigen_gap_check over a stack of spectra (..., p) → bool (...)."""
    lam = np.asarray(lam, dtype=np.float64)
    scale = np.maximum(lam[..., 0], eps_abs)
    if require_positive:
        ok = lam[..., -1] / scale > rel_tol
    else:
        ok = np.ones(lam.shape[:-1], dtype=bool)
    if lam.shape[-1] > 1:
        gaps = (lam[..., :-1] - lam[..., 1:]) / scale[..., None]
        ok &= np.all(gaps > rel_tol, axis=-1)
    return ok


def pairwise_inverse_gaps(lam) -> NDArray[np.float64]:
    """
    Matrix W with W[k, l] = 1/(λₖ−λₗ) for k ≠ l and 0 on the diagonal.

    Callers are expected to have passed the gap check.
    """
    lam = np.asarray(lam, dtype=np.float64)
    p = lam.shape[-1]
    diff = lam[..., :, None] - lam[..., None, :]
    eye = np.eye(p, dtype=bool)
    safe = np.where(eye, 1.0, diff)
    return np.where(eye, 0.0, 1.0 / safe)
