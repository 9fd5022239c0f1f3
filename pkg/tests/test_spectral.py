import numpy as np
import pytest
from scipy.stats import ortho_group

from orthoshrink.exceptions import DegenerateSpectrumError, InvalidDimensionsError, NumericError
from orthoshrink.spectral import (
    ProblemDims,
    as_observation,
    eigen_gap_check,
    gap_mask,
    gram_spectral,
    pairwise_inverse_gaps,
    thin_svd
)


def test_problem_dims_validation():
    assert str(ProblemDims(10, 3)) == "10x3"
    assert ProblemDims.of(np.zeros((8, 5))) == ProblemDims(8, 5)
    with pytest.raises(InvalidDimensionsError):
        ProblemDims(2, 3)
    with pytest.raises(InvalidDimensionsError):
        ProblemDims(0, 1)


def test_as_observation_rejects_bad_input():
    with pytest.raises(NumericError):
        as_observation(np.ones(3))
    with pytest.raises(NumericError):
        as_observation(np.array([[1.0, np.nan], [0.0, 1.0]]))
    with pytest.raises(InvalidDimensionsError):
        as_observation(np.zeros((2, 4)))


def test_gram_spectral_padded_identity():
    X = np.zeros((5, 3))
    X[:3, :3] = np.eye(3)
    sp = gram_spectral(X)
    np.testing.assert_allclose(sp.eigenvalues, [1.0, 1.0, 1.0])
    np.testing.assert_allclose(sp.eigenvectors.T @ sp.eigenvectors, np.eye(3), atol=1e-12)


def test_gram_spectral_diagonal_columns():
    X = np.zeros((4, 2))
    X[0, 0], X[1, 1] = 2.0, 1.0
    sp = gram_spectral(X)
    np.testing.assert_allclose(sp.eigenvalues, [4.0, 1.0])
    np.testing.assert_allclose(np.abs(sp.eigenvectors), np.eye(2), atol=1e-12)


def test_gram_spectral_invariants_on_random_draws(rng):
    X = rng.standard_normal((10_000, 10, 3))
    sp = gram_spectral(X)
    lam, V = sp.eigenvalues, sp.eigenvectors
    assert np.all(np.diff(lam, axis=-1) <= 0)
    assert np.all(lam >= 0)
    np.testing.assert_allclose(np.swapaxes(V, -1, -2) @ V, np.broadcast_to(np.eye(3), V.shape), atol=1e-12)
    gram = np.swapaxes(X, -1, -2) @ X
    rebuilt = (V * lam[..., None, :]) @ np.swapaxes(V, -1, -2)
    err = np.linalg.norm(rebuilt - gram, axis=(-2, -1)) / np.linalg.norm(gram, axis=(-2, -1))
    assert err.max() < 1e-10


def test_thin_svd_examples():
    np.testing.assert_allclose(thin_svd(np.zeros((4, 2))).singular_values, [0.0, 0.0])
    X = np.zeros((4, 2))
    X[0, 0], X[1, 1] = 3.0, 2.0
    np.testing.assert_allclose(thin_svd(X).singular_values, [3.0, 2.0])


def test_thin_svd_matches_gram_spectral(rng):
    X = rng.standard_normal((10, 3))
    svd = thin_svd(X)
    np.testing.assert_allclose(svd.compose(svd.singular_values), X, atol=1e-10)
    np.testing.assert_allclose(svd.left.T @ svd.left, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(svd.singular_values ** 2, gram_spectral(X).eigenvalues, rtol=1e-10)


def test_eigen_gap_check_examples():
    assert eigen_gap_check([4.0, 2.0, 1.0], 1e-8).ok

    tied = eigen_gap_check([4.0, 4.0, 1.0], 1e-8)
    assert not tied.ok
    assert tied.pair == (1, 2)

    zero = eigen_gap_check([4.0, 2.0, 0.0])
    assert not zero.ok
    assert zero.index == 3
    assert "numerically zero" in zero.describe()

    assert eigen_gap_check([4.0, 2.0, 0.0], require_positive=False).ok


def test_gap_mask_matches_scalar_check():
    spectra = np.array([[4.0, 2.0, 1.0], [4.0, 4.0, 1.0], [4.0, 2.0, 0.0]])
    np.testing.assert_array_equal(gap_mask(spectra), [True, False, False])
    np.testing.assert_array_equal(gap_mask(spectra, require_positive=False), [True, False, True])


def test_require_gap_raises_with_offending_pair():
    X = np.zeros((5, 3))
    X[:3, :3] = np.diag([2.0, 2.0, 1.0])
    with pytest.raises(DegenerateSpectrumError) as info:
        gram_spectral(X).require_gap()
    assert info.value.check.pair == (1, 2)


def test_pairwise_inverse_gaps():
    W = pairwise_inverse_gaps([3.0, 1.0])
    np.testing.assert_allclose(W, [[0.0, 0.5], [-0.5, 0.0]])


def test_spectrum_is_orthogonally_invariant(rng):
    X = rng.standard_normal((10, 3))
    P = ortho_group.rvs(10, random_state=rng)
    Q = ortho_group.rvs(3, random_state=rng)
    lam = gram_spectral(X).eigenvalues
    np.testing.assert_allclose(gram_spectral(X @ Q).eigenvalues, lam, rtol=1e-10)
    np.testing.assert_allclose(gram_spectral(P @ X).eigenvalues, lam, rtol=1e-10)


def test_projector_and_conjugate(observation):
    sp = gram_spectral(observation)
    total = sum(sp.projector(j) for j in range(1, 4))
    np.testing.assert_allclose(total, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(sp.conjugate(sp.eigenvalues), observation.T @ observation, rtol=1e-10)
