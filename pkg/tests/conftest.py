import numpy as np
import pytest

from orthoshrink.spectral import ProblemDims, gram_spectral


def well_separated(rng, n, p, separation=1e-2):
    """Gaussian n×p observation whose relative eigen-gaps (λ_p included) are at least `separation`."""
    while True:
        X = rng.standard_normal((n, p))
        lam = gram_spectral(X).eigenvalues
        gaps = np.append(lam[:-1] - lam[1:], lam[-1]) / lam[0]
        if gaps.min() >= separation:
            return X


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def dims():
    return ProblemDims(10, 3)


@pytest.fixture
def observation(rng):
    return well_separated(rng, 10, 3)


@pytest.fixture
def wide_observation(rng):
    return well_separated(rng, 8, 5)


@pytest.fixture
def observations(rng):
    return [well_separated(rng, 10, 3) for _ in range(5)]
