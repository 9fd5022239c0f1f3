"""Orthogonally invariant estimators of a normal mean matrix"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from ..exceptions import InvalidDimensionsError, SingularityError
from ..invariant_calculus import InvariantObjective, matrix_gradient_invariant, zero_objective
from ..spectral import EPS_ABS, Observation, ProblemDims, as_observation, thin_svd


@dataclass(frozen=True)
class ShrinkageCoefficients:
    """Per-singular-value shrink amounts c₁…c_p ≥ 0."""

    c: NDArray[np.float64]

    def __post_init__(self) -> None:
        c = np.array(self.c, dtype=np.float64).reshape(-1)
        if c.size == 0:
            raise ValueError("shrinkage coefficients must not be empty")
        if not np.all(np.isfinite(c)) or np.any(c < 0):
            raise ValueError(f"shrinkage coefficients must be finite and nonnegative, got {c.tolist()}")
        c.setflags(write=False)
        object.__setattr__(self, 'c', c)

    @property
    def p(self) -> int:
        return self.c.size

    def check_dims(self, dims: ProblemDims) -> None:
        if self.p != dims.p:
            raise InvalidDimensionsError(f"{self.p} coefficients given for p={dims.p}")

    def __eq__(self, other) -> bool:
        return isinstance(other, ShrinkageCoefficients) and np.array_equal(self.c, other.c)

    def __hash__(self) -> int:
        return hash(self.c.tobytes())


class EstimatorKind(Enum):
    MLE = 'mle'
    SHRINKAGE = 'shrinkage'
    POSITIVE_PART = 'positive_part_shrinkage'
    PSEUDO_BAYES = 'pseudo_bayes'


@dataclass(frozen=True)
class EstimatorSpec:
    """A named member of the estimator zoo."""

    kind: EstimatorKind
    label: str
    coefficients: ShrinkageCoefficients | None = None
    objective: InvariantObjective | None = None

    def __post_init__(self) -> None:
        if self.kind in (EstimatorKind.SHRINKAGE, EstimatorKind.POSITIVE_PART) and self.coefficients is None:
            raise ValueError(f"{self.kind.value} estimator '{self.label}' needs shrinkage coefficients")
        if self.kind is EstimatorKind.PSEUDO_BAYES and self.objective is None:
            raise ValueError(f"pseudo-Bayes estimator '{self.label}' needs an objective")

    @property
    def needs_gap(self) -> bool:
        """Whether applying the estimator divides by λₖ or (λₖ−λₗ)."""
        return self.kind in (EstimatorKind.SHRINKAGE, EstimatorKind.PSEUDO_BAYES)

    @property
    def is_positive_part(self) -> bool:
        return self.kind is EstimatorKind.POSITIVE_PART

    def sure_objective(self) -> InvariantObjective | None:
        """Objective h with M̂ = X + ∇̃h, or None when no analytic SURE exists."""
        if self.kind is EstimatorKind.MLE:
            return zero_objective()
        if self.kind is EstimatorKind.SHRINKAGE:
            return log_objective(self.coefficients)
        if self.kind is EstimatorKind.PSEUDO_BAYES:
            return self.objective
        return None

    def apply(self, X: Observation) -> NDArray[np.float64]:
        """Evaluate the estimator on an observation (or a stack)."""
        if self.kind is EstimatorKind.MLE:
            return mle(X)
        if self.kind is EstimatorKind.SHRINKAGE:
            return spectral_shrinkage(X, self.coefficients)
        if self.kind is EstimatorKind.POSITIVE_PART:
            return positive_part_shrinkage(X, self.coefficients)
        return pseudo_bayes(X, self.objective)


def mle(X: Observation) -> NDArray[np.float64]:
    """The maximum likelihood estimator M̂ = X."""
    return np.array(as_observation(X), copy=True)


def pseudo_bayes(X: Observation, obj: InvariantObjective) -> NDArray[np.float64]:
    """M̂ = X + ∇̃h(X)."""
    X = as_observation(X)
    return X + matrix_gradient_invariant(X, obj)


def _as_coefficients(c) -> ShrinkageCoefficients:
    return c if isinstance(c, ShrinkageCoefficients) else ShrinkageCoefficients(c)


def spectral_shrinkage(X: Observation, c) -> NDArray[np.float64]:
    """
    Singular value shrinkage U diag(σₖ − cₖ/σₖ) Vᵀ

    Args:
        X: n×p observation (or a stack of them)
        c (ShrinkageCoefficients): Shrink amounts, one per singular value

    Returns:
        np.ndarray: Estimate with the shape of X

    Raises:
        SingularityError: If some σₖ ≤ EPS_ABS while cₖ > 0
    """
    c = _as_coefficients(c)
    c.check_dims(ProblemDims.of(X))
    svd = thin_svd(X)
    sigma = svd.singular_values
    nonzero = sigma > EPS_ABS
    if np.any(~nonzero & (c.c > 0.0)):
        raise SingularityError("vanishing singular value with a nonzero shrinkage coefficient")
    safe = np.where(nonzero, sigma, 1.0)
    return svd.compose(sigma - np.where(c.c > 0.0, c.c / safe, 0.0))


def positive_part_shrinkage(X: Observation, c) -> NDArray[np.float64]:
    """
    U diag((σₖ − cₖ/σₖ)₊) Vᵀ; a singular value at or below EPS_ABS maps to zero.
    """
    c = _as_coefficients(c)
    c.check_dims(ProblemDims.of(X))
    svd = thin_svd(X)
    sigma = svd.singular_values
    nonzero = sigma > EPS_ABS
    safe = np.where(nonzero, sigma, 1.0)
    shrunk = np.where(nonzero, np.maximum(sigma - c.c / safe, 0.0), 0.0)
    return svd.compose(shrunk)


def efron_morris(X: Observation) -> NDArray[np.float64]:
    """Closed form X(I − (n−p−1)(XᵀX)⁻¹)."""
    X = as_observation(X)
    dims = ProblemDims.of(X)
    coef = efron_morris_coeffs(dims).c[0]
    gram = np.swapaxes(X, -1, -2) @ X
    return X - coef * X @ np.linalg.inv(gram)


def efron_morris_coeffs(dims: ProblemDims) -> ShrinkageCoefficients:
    """cₖ ≡ n − p − 1 (requires n > p + 1)."""
    c = dims.n - dims.p - 1
    if c <= 0:
        raise InvalidDimensionsError(f"Efron-Morris needs n > p + 1, got n={dims.n}, p={dims.p}")
    return ShrinkageCoefficients(np.full(dims.p, float(c)))


def stein_coeffs(dims: ProblemDims) -> ShrinkageCoefficients:
    """cₖ = n + p − 2k − 1 for k = 1..p (requires n ≥ p + 1 so that c_p ≥ 0)."""
    if dims.n < dims.p + 1:
        raise InvalidDimensionsError(f"Stein's coefficients need n >= p + 1, got n={dims.n}, p={dims.p}")
    k = np.arange(1, dims.p + 1, dtype=np.float64)
    return ShrinkageCoefficients(dims.n + dims.p - 2.0 * k - 1.0)


def log_objective(c) -> InvariantObjective:
    """
    H(λ) = −½ Σ cₖ log λₖ, whose pseudo-Bayes estimator is spectral_shrinkage(·, c)
    """
    coeffs = _as_coefficients(c).c

    def value(lam):
        lam = np.asarray(lam)
        with np.errstate(divide='ignore', invalid='ignore'):
            logs = np.where(coeffs > 0.0, np.log(lam), 0.0)
        return -0.5 * np.sum(coeffs * logs, axis=-1)

    return InvariantObjective(
        value=value,
        grad=lambda lam: -coeffs / (2.0 * np.asarray(lam)),
        hess_diag=lambda lam: coeffs / (2.0 * np.asarray(lam) ** 2),
        label=f"log({','.join(f'{x:g}' for x in coeffs)})",
        singular=bool(np.any(coeffs > 0.0))
    )
