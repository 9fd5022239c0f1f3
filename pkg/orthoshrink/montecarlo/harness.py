"""
Parallel Monte Carlo estimation of matrix quadratic risk.

Replications are cut into fixed-size chunks. Chunk k always draws from
substream(seed, k) and returns its own count, mean and scatter; these are
reduced in chunk order, so results are bit-identical for any thread count.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from ..estimators import EstimatorKind, EstimatorSpec
from ..exceptions import SamplingError
from ..invariant_calculus import InvariantObjective, matrix_gradient_invariant
from ..risk import assemble_sure, general_risk_diagonal
from ..spectral import SpectralPair, gap_mask, gram_spectral
from ..utils.helpers import resolve_threads
from .sampling import MeanSpec, mean_from_singular_values, sample_observation, substream

logger = logging.getLogger(__name__)

CHUNK_SIZE = 2048
MAX_REJECT_RATE = 0.01


@dataclass
class _Moments:
    """Count, mean and centred cross-product sum of vec(L) over a chunk of draws."""

    p: int
    count: int = 0
    centre: NDArray[np.float64] | None = None
    scatter: NDArray[np.float64] | None = None
    rejects: int = 0

    def __post_init__(self) -> None:
        if self.centre is None:
            self.centre = np.zeros(self.p * self.p)
        if self.scatter is None:
            self.scatter = np.zeros((self.p * self.p, self.p * self.p))

    def add(self, losses: NDArray[np.float64]) -> None:
        flat = losses.reshape(losses.shape[0], -1)
        if flat.shape[0] == 0:
            return
        centre = flat.mean(axis=0)
        deviations = flat - centre
        self.merge(_Moments(self.p, flat.shape[0], centre, deviations.T @ deviations))

    def merge(self, other: '_Moments') -> None:
        """Pairwise update of mean and scatter (Chan, Golub and LeVeque)."""
        self.rejects += other.rejects
        if other.count == 0:
            return
        if self.count == 0:
            self.count = other.count
            self.centre = other.centre.copy()
            self.scatter = other.scatter.copy()
            return
        count = self.count + other.count
        delta = other.centre - self.centre
        self.centre = self.centre + delta * (other.count / count)
        self.scatter = self.scatter + other.scatter + np.outer(delta, delta) * (self.count * other.count / count)
        self.count = count

    def mean(self) -> NDArray[np.float64]:
        mean = self.centre.reshape(self.p, self.p)
        return 0.5 * (mean + mean.T)

    def covariance(self) -> NDArray[np.float64]:
        """Sample covariance of vec(L)."""
        return self.scatter / (self.count - 1)

    def quadratic_stderr(self, weights: NDArray[np.float64]) -> float:
        """Standard error of the mean of weightsᵀ vec(L)."""
        variance = float(weights @ self.covariance() @ weights)
        return math.sqrt(max(variance, 0.0) / self.count)


@dataclass(frozen=True)
class MatrixRiskEstimate:
    """
    Monte Carlo estimate of R(M, M̂) = E[(M̂−M)ᵀ(M̂−M)].

    `eigenvalue_stderr` is a proxy: the standard error of wₖᵀLwₖ for the
    fixed eigenvectors wₖ of `mean`.
    """

    mean: NDArray[np.float64]
    stderr: NDArray[np.float64]
    eigenvalues: NDArray[np.float64]
    eigenvalue_stderr: NDArray[np.float64]
    frobenius: float
    frobenius_stderr: float
    reps: int
    seed: int
    rejects: int = 0
    label: str = ''

    @classmethod
    def from_moments(cls, moments: _Moments, seed: int, label: str = '') -> 'MatrixRiskEstimate':
        p = moments.p
        mean = moments.mean()
        cov = moments.covariance()
        stderr = np.sqrt(np.maximum(np.diag(cov), 0.0) / moments.count).reshape(p, p)
        w, V = np.linalg.eigh(mean)
        eigenvalues = w[::-1]
        vectors = V[:, ::-1]
        eigenvalue_stderr = np.array([
            moments.quadratic_stderr(np.kron(vectors[:, k], vectors[:, k])) for k in range(p)
        ])
        return cls(
            mean=mean,
            stderr=0.5 * (stderr + stderr.T),
            eigenvalues=eigenvalues,
            eigenvalue_stderr=eigenvalue_stderr,
            frobenius=float(np.trace(mean)),
            frobenius_stderr=moments.quadratic_stderr(np.eye(p).ravel()),
            reps=moments.count,
            seed=int(seed),
            rejects=moments.rejects,
            label=label
        )


@dataclass(frozen=True)
class SureAgreement:
    """Paired comparison of per-draw loss and per-draw analytic SURE."""

    diff_mean: NDArray[np.float64]
    diff_stderr: NDArray[np.float64]
    loss_mean: NDArray[np.float64]
    sure_mean: NDArray[np.float64]
    reps: int
    seed: int
    rejects: int = 0
    label: str = ''
    risk: MatrixRiskEstimate | None = None

    @property
    def max_z(self) -> float:
        """Largest entrywise |mean difference| in units of its standard error."""
        with np.errstate(divide='ignore', invalid='ignore'):
            z = np.where(self.diff_stderr > 0, np.abs(self.diff_mean) / self.diff_stderr,
                         np.where(self.diff_mean == 0, 0.0, np.inf))
        return float(np.max(z))

    def within(self, n_se: float = 4.0) -> bool:
        return self.max_z <= n_se


def _chunk_sizes(reps: int) -> list:
    full, rest = divmod(reps, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


def _reject_budget(reps: int) -> int:
    return int(math.floor(MAX_REJECT_RATE * reps))


def _check_reps(reps: int) -> int:
    reps = int(reps)
    if reps < 2:
        raise ValueError(f"reps must be at least 2, got {reps}")
    return reps


def _draw_accepted(M, gen, size: int, accept: Callable, budget: int, label: str):
    """
    Draw `size` observations, redrawing rejected ones from the same stream

    Returns:
        tuple: (stack of accepted observations, spectral pair or None, rejects)
    """
    kept, pairs, rejects, need = [], [], 0, size
    while need > 0:
        X = sample_observation(M, gen, need)
        mask, sp = accept(X)
        bad = int(need - np.count_nonzero(mask))
        if bad:
            rejects += bad
            logger.warning("'%s': rejected %d degenerate draw(s)", label, bad)
            if rejects > budget:
                raise SamplingError(
                    f"'{label}': {rejects} rejected draws exceed the {MAX_REJECT_RATE:.0%} budget"
                )
        kept.append(X[mask])
        if sp is not None:
            pairs.append((sp.eigenvalues[mask], sp.eigenvectors[mask]))
        need -= int(np.count_nonzero(mask))
    X = np.concatenate(kept)
    sp = None
    if pairs:
        sp = SpectralPair(np.concatenate([lam for lam, _ in pairs]), np.concatenate([V for _, V in pairs]))
    return X, sp, rejects


def _spectral_filter(require_positive: bool) -> Callable:
    def accept(X):
        sp = gram_spectral(X)
        return gap_mask(sp.eigenvalues, sp.gap_tolerance, require_positive=require_positive), sp
    return accept


def _accept_all(X):
    return np.ones(X.shape[0], dtype=bool), None


def _estimator_filter(est: EstimatorSpec) -> Callable:
    if not est.needs_gap:
        return _accept_all
    singular = est.kind is EstimatorKind.SHRINKAGE or est.objective.singular
    return _spectral_filter(require_positive=singular)


def _run_chunks(reps: int, worker: Callable, threads: int | None) -> list:
    tasks = list(enumerate(_chunk_sizes(reps)))
    workers = min(resolve_threads(threads), len(tasks))
    if workers <= 1:
        return [worker(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks))


def _reduce(parts: list, p: int) -> _Moments:
    total = _Moments(p)
    for part in parts:
        total.merge(part)
    return total


def _check_rejects(rejects: int, reps: int, label: str) -> None:
    if rejects > _reject_budget(reps):
        raise SamplingError(f"'{label}': rejection rate {rejects / reps:.2%} exceeds {MAX_REJECT_RATE:.0%}")


def mc_matrix_risk(spec: MeanSpec, est: EstimatorSpec, reps: int, seed: int,
                   threads: int | None = None) -> MatrixRiskEstimate:
    """
    Monte Carlo estimate of the matrix quadratic risk of an estimator

    Args:
        spec (MeanSpec): Dimensions and singular values of the mean
        est (EstimatorSpec): Estimator to evaluate
        reps (int): Number of replications, at least 2
        seed (int): Stream seed
        threads (int, optional): Worker threads; results do not depend on it

    Returns:
        MatrixRiskEstimate: Mean loss matrix with standard errors

    Raises:
        SamplingError: If more than 1% of draws are rejected
    """
    reps = _check_reps(reps)
    M = mean_from_singular_values(spec)
    p = spec.dims.p
    accept = _estimator_filter(est)
    budget = _reject_budget(reps)

    def worker(task):
        index, size = task
        X, _, rejects = _draw_accepted(M, substream(seed, index), size, accept, budget, est.label)
        residual = est.apply(X) - M
        moments = _Moments(p, rejects=rejects)
        moments.add(np.swapaxes(residual, -1, -2) @ residual)
        return moments

    moments = _reduce(_run_chunks(reps, worker, threads), p)
    _check_rejects(moments.rejects, reps, est.label)
    estimate = MatrixRiskEstimate.from_moments(moments, seed, est.label)
    logger.info("%s at %s: frobenius %.4f ± %.4f (%d reps, %d rejects)", est.label, spec,
                estimate.frobenius, estimate.frobenius_stderr, reps, estimate.rejects)
    return estimate


def mc_sure_agreement(spec: MeanSpec, obj: InvariantObjective, reps: int, seed: int,
                      threads: int | None = None, label: str | None = None) -> SureAgreement:
    """
    Paired check that the analytic SURE is unbiased for a pseudo-Bayes estimator

    Each draw contributes L − S where L is its loss matrix and S its
    SURE; the mean difference should vanish within its standard error.

    Args:
        spec (MeanSpec): Dimensions and singular values of the mean
        obj (InvariantObjective): Objective h of M̂ = X + ∇̃h
        reps (int): Number of replications, at least 2
        seed (int): Stream seed
        threads (int, optional): Worker threads
        label (str, optional): Name used in logs and the report

    Returns:
        SureAgreement: Paired mean difference, its SE, both averages, and the
            risk estimate of the same draws
    """
    reps = _check_reps(reps)
    label = label or obj.label
    M = mean_from_singular_values(spec)
    n, p = spec.dims.n, spec.dims.p
    accept = _spectral_filter(require_positive=obj.singular)
    budget = _reject_budget(reps)

    def worker(task):
        index, size = task
        X, sp, rejects = _draw_accepted(M, substream(seed, index), size, accept, budget, label)
        residual = X + matrix_gradient_invariant(X, obj, sp) - M
        loss = np.swapaxes(residual, -1, -2) @ residual
        lam = sp.eigenvalues
        sure = assemble_sure(sp, general_risk_diagonal(lam, obj.grad(lam), obj.hess_diag(lam), n), n)
        parts = (_Moments(p, rejects=rejects), _Moments(p, rejects=rejects), _Moments(p))
        for part, values in zip(parts, (loss - sure, loss, sure)):
            part.add(values)
        return parts

    chunks = _run_chunks(reps, worker, threads)
    diff, loss, sure = (_reduce([chunk[k] for chunk in chunks], p) for k in range(3))
    _check_rejects(diff.rejects, reps, label)
    diff_stderr = np.sqrt(np.maximum(np.diag(diff.covariance()), 0.0) / diff.count).reshape(p, p)
    report = SureAgreement(
        diff_mean=diff.mean(),
        diff_stderr=0.5 * (diff_stderr + diff_stderr.T),
        loss_mean=loss.mean(),
        sure_mean=sure.mean(),
        reps=reps,
        seed=int(seed),
        rejects=diff.rejects,
        label=label,
        risk=MatrixRiskEstimate.from_moments(loss, seed, label)
    )
    logger.info("%s at %s: max |loss − SURE| z-score %.2f (%d reps)", label, spec, report.max_z, reps)
    return report
