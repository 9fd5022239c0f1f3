"""
Mean specifications and seeded Gaussian sampling.

Every random draw comes from a substream addressed by (seed, key...), so
the same address always yields the same numbers no matter which worker
thread asks for it.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..exceptions import InvalidDimensionsError
from ..spectral import ProblemDims

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class MeanSpec:
    """Dimensions plus the singular values σ₁(M) ≥ … ≥ σ_p(M) ≥ 0 of the mean."""

    dims: ProblemDims
    singular_values: tuple

    def __post_init__(self) -> None:
        sigma = tuple(float(s) for s in self.singular_values)
        if len(sigma) != self.dims.p:
            raise InvalidDimensionsError(
                f"{len(sigma)} singular values given for p={self.dims.p}"
            )
        if not all(np.isfinite(sigma)) or min(sigma) < 0:
            raise ValueError(f"singular values must be finite and nonnegative, got {sigma}")
        if any(a < b for a, b in zip(sigma, sigma[1:])):
            raise ValueError(f"singular values must be sorted descending, got {sigma}")
        object.__setattr__(self, 'singular_values', sigma)

    @classmethod
    def from_unsorted(cls, dims: ProblemDims, values) -> 'MeanSpec':
        """Build a spec from values in any order (the risk only sees σ(M))."""
        return cls(dims, tuple(sorted((float(v) for v in values), reverse=True)))

    def __str__(self) -> str:
        return f"{self.dims} σ=({', '.join(f'{s:g}' for s in self.singular_values)})"


def mean_from_singular_values(spec: MeanSpec) -> NDArray[np.float64]:
    """Diagonal embedding M_{kk} = σₖ(M), zero elsewhere."""
    M = np.zeros((spec.dims.n, spec.dims.p))
    M[np.arange(spec.dims.p), np.arange(spec.dims.p)] = spec.singular_values
    return M


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent PCG64 generator for the address (seed, key...)."""
    sequence = np.random.SeedSequence(entropy=int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(sequence))


def point_seed(seed: int, index: int, label: str) -> int:
    """
    seed XOR a 64-bit digest of (grid index, estimator label)

    Args:
        seed (int): Master seed of the sweep
        index (int): Grid point index (or n for appendix rows)
        label (str): Estimator label

    Returns:
        int: Stream seed for that point
    """
    digest = hashlib.blake2b(f"{int(index)}|{label}".encode('utf-8'), digest_size=8).digest()
    return (int(seed) ^ int.from_bytes(digest, 'little')) & SEED_MASK


def sample_observation(M, stream: np.random.Generator, size: int | None = None) -> NDArray[np.float64]:
    """
    X = M + Z with Z standard Gaussian, one draw per entry

    Args:
        M: n×p mean matrix
        stream (np.random.Generator): Source of randomness
        size (int, optional): Number of stacked draws; a single n×p draw when None

    Returns:
        np.ndarray: n×p observation, or a (size, n, p) stack
    """
    M = np.asarray(M, dtype=np.float64)
    shape = M.shape if size is None else (int(size),) + M.shape
    return M + stream.standard_normal(shape)
