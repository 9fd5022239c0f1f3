"""
Sweeps of the mean's singular values, and the figure and appendix
presets built on them.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..estimators import resolve_estimator
from ..exceptions import ConfigError, InvalidDimensionsError
from ..spectral import ProblemDims
from .harness import MatrixRiskEstimate, mc_matrix_risk
from .sampling import MeanSpec, point_seed

logger = logging.getLogger(__name__)

DEFAULT_REPS = 100_000
APPENDIX_SIGMA = 50.0


@dataclass(frozen=True)
class SweepSpec:
    """
    One axis of σ(M) varied over a grid, the others held fixed

    Attributes:
        dims (ProblemDims): Problem dimensions
        estimators (tuple): Estimator labels
        axis (int): 1-based index of the varying singular value
        fixed (tuple): Length-p values; entry `axis` is overwritten per point
        grid (tuple): (start, stop, step), stop inclusive
        reps (int): Replications per (point, estimator)
        seed (int): Master seed
        name (str): Preset name, if any
    """

    dims: ProblemDims
    estimators: tuple
    axis: int
    fixed: tuple
    grid: tuple
    reps: int = DEFAULT_REPS
    seed: int = 42
    name: str = ''

    def __post_init__(self) -> None:
        object.__setattr__(self, 'estimators', tuple(self.estimators))
        object.__setattr__(self, 'fixed', tuple(float(v) for v in self.fixed))
        object.__setattr__(self, 'grid', tuple(float(v) for v in self.grid))
        if not self.estimators:
            raise ConfigError("a sweep needs at least one estimator")
        if len(self.fixed) != self.dims.p:
            raise InvalidDimensionsError(f"{len(self.fixed)} fixed singular values given for p={self.dims.p}")
        if not 1 <= self.axis <= self.dims.p:
            raise ConfigError(f"sweep axis must be in 1..{self.dims.p}, got {self.axis}")
        if len(self.grid) != 3:
            raise ConfigError(f"grid must be (start, stop, step), got {self.grid}")
        start, stop, step = self.grid
        if step <= 0 or stop < start:
            raise ConfigError(f"grid {start:g}:{stop:g}:{step:g} is empty")
        if start < 0 or min(self.fixed) < 0:
            raise ConfigError("singular values must be nonnegative")
        if self.reps < 2:
            raise ConfigError(f"reps must be at least 2, got {self.reps}")

    def grid_values(self) -> list:
        start, stop, step = self.grid
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(count)]

    def mean_spec(self, value: float) -> MeanSpec:
        """σ(M) with the swept entry set to `value`, re-sorted descending."""
        sigma = list(self.fixed)
        sigma[self.axis - 1] = value
        return MeanSpec.from_unsorted(self.dims, sigma)


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    estimator: str
    estimate: MatrixRiskEstimate
    seed: int


@dataclass
class SweepTable:
    """Rows in grid order, estimators in SweepSpec order."""

    spec: SweepSpec
    rows: list = field(default_factory=list)

    @property
    def p(self) -> int:
        return self.spec.dims.p

    def for_estimator(self, label: str) -> list:
        return [row for row in self.rows if row.estimator == label]


@dataclass(frozen=True)
class FigurePreset:
    """Settings of one figure panel; `quantity` is what the panel plots."""

    name: str
    estimators: tuple
    axis: int
    fixed: tuple
    grid: tuple
    quantity: str
    dims: ProblemDims = ProblemDims(10, 3)

    def sweep(self, reps: int = DEFAULT_REPS, seed: int = 42) -> SweepSpec:
        return SweepSpec(self.dims, self.estimators, self.axis, self.fixed, self.grid, reps, seed, self.name)


@dataclass(frozen=True)
class AppendixPreset:
    name: str
    p: int
    n_values: tuple
    sigma: float = APPENDIX_SIGMA


def _figure_presets() -> dict:
    presets = {}
    for number, estimators, quantity in ((1, ('em', 'stein'), 'frobenius'),
                                         (2, ('em', 'stein'), 'eigenvalues'),
                                         (3, ('em+', 'stein+'), 'frobenius'),
                                         (4, ('em+', 'stein+'), 'eigenvalues')):
        left = FigurePreset(f"{number}-left", estimators, 1, (0.0, 0.0, 0.0), (0.0, 20.0, 1.0), quantity)
        right = FigurePreset(f"{number}-right", estimators, 2, (20.0, 0.0, 0.0), (0.0, 20.0, 1.0), quantity)
        presets[left.name] = left
        presets[right.name] = right
    return presets


FIGURE_PRESETS = _figure_presets()

APPENDIX_PRESETS = {
    'appendix-left': AppendixPreset('appendix-left', 3, tuple(range(5, 11))),
    'appendix-right': AppendixPreset('appendix-right', 10, tuple(range(12, 21))),
}

PRESET_NAMES = tuple(FIGURE_PRESETS) + tuple(APPENDIX_PRESETS)


def run_sweep(spec: SweepSpec, threads: int | None = None) -> SweepTable:
    """
    Estimate the risk at every (grid point, estimator)

    Each point draws from its own stream seeded with
    point_seed(spec.seed, grid index, label).

    Args:
        spec (SweepSpec): Sweep definition
        threads (int, optional): Worker threads per point

    Returns:
        SweepTable: One row per grid value and estimator
    """
    estimators = [resolve_estimator(label, spec.dims) for label in spec.estimators]
    table = SweepTable(spec)
    values = spec.grid_values()
    logger.info("sweep %s: %d points x %d estimators, %d reps each",
                spec.name or spec.dims, len(values), len(estimators), spec.reps)
    for index, value in enumerate(values):
        mean_spec = spec.mean_spec(value)
        for est in estimators:
            estimate = mc_matrix_risk(mean_spec, est, spec.reps, point_seed(spec.seed, index, est.label), threads)
            table.rows.append(SweepRow(value, est.label, estimate, spec.seed))
    return table


@dataclass(frozen=True)
class AppendixRow:
    """
    Largest risk eigenvalue of Stein's estimator at one n

    `admissible` is False when n < p + 2; such rows are still computed when
    Stein's coefficients exist and hold NaN otherwise.
    """

    n: int
    p: int
    sigma: float
    largest_eigenvalue: float
    eigenvalue_stderr: float
    reps: int
    seed: int
    rejects: int
    admissible: bool

    @property
    def below_n(self) -> bool:
        return bool(self.largest_eigenvalue < self.n)


def appendix_sweep(p: int, n_values, sigma: float = APPENDIX_SIGMA, reps: int = DEFAULT_REPS,
                   seed: int = 42, threads: int | None = None) -> list:
    """
    Largest eigenvalue of Stein's risk matrix with σ₁(M) = … = σ_p(M) = sigma

    Args:
        p (int): Number of columns
        n_values: Row counts to evaluate
        sigma (float): Common singular value of the mean
        reps (int): Replications per n
        seed (int): Master seed; row n uses point_seed(seed, n, 'stein')
        threads (int, optional): Worker threads

    Returns:
        list[AppendixRow]: One row per n, in the given order
    """
    n_values = list(n_values)
    if not n_values:
        raise ConfigError("appendix needs a non-empty n range")
    rows = []
    for n in n_values:
        admissible = n >= p + 2
        if n < p + 1:
            logger.warning("n=%d < p+1=%d: Stein's coefficients undefined, row left empty", n, p + 1)
            rows.append(AppendixRow(n, p, sigma, math.nan, math.nan, reps, seed, 0, False))
            continue
        if not admissible:
            logger.warning("n=%d < p+2=%d: outside the range where domination is claimed", n, p + 2)
        dims = ProblemDims(n, p)
        est = resolve_estimator('stein', dims)
        spec = MeanSpec(dims, (float(sigma),) * p)
        estimate = mc_matrix_risk(spec, est, reps, point_seed(seed, n, est.label), threads)
        rows.append(AppendixRow(n, p, float(sigma), float(estimate.eigenvalues[0]),
                                float(estimate.eigenvalue_stderr[0]), reps, seed, estimate.rejects, admissible))
    return rows


def resize_preset(preset: FigurePreset, grid=None) -> FigurePreset:
    """Copy of a preset with a different grid (used for quick runs)."""
    return preset if grid is None else replace(preset, grid=tuple(grid))


def sweep_values_array(table: SweepTable, label: str, quantity: str = 'frobenius') -> np.ndarray:
    """Values of one estimator's curve: Frobenius risk or the p eigenvalues per row."""
    rows = table.for_estimator(label)
    if quantity == 'frobenius':
        return np.array([row.estimate.frobenius for row in rows])
    return np.array([row.estimate.eigenvalues for row in rows])
