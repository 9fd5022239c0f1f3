import numpy as np
import pytest
from scipy.stats import ortho_group

from orthoshrink.estimators import efron_morris_coeffs, log_objective, resolve_estimator, stein_coeffs
from orthoshrink.exceptions import DegenerateSpectrumError, InvalidDimensionsError
from orthoshrink.invariant_calculus import (
    gradient_gram,
    matrix_laplacian_invariant,
    polynomial_objective,
    zero_objective
)
from orthoshrink.risk import (
    divergence_sure_numeric,
    efron_morris_objective,
    em_zero_mean_exact_risk,
    kink_proximity,
    largest_eigenvalue,
    sure_frobenius,
    sure_matrix_general,
    sure_matrix_shrinkage,
    sure_matrix_stein
)
from orthoshrink.spectral import ProblemDims
from orthoshrink.utils import relative_error


def test_mle_sure_is_n_identity(observation):
    sure = sure_matrix_general(observation, zero_objective())
    np.testing.assert_allclose(sure.entries, 10 * np.eye(3), atol=1e-12)
    assert sure.frobenius == pytest.approx(30.0)


def test_general_sure_is_laplacian_plus_gradient_gram(observation, dims):
    obj = efron_morris_objective(dims)
    expected = 10 * np.eye(3) + 2 * matrix_laplacian_invariant(observation, obj) + gradient_gram(observation, obj)
    assert relative_error(sure_matrix_general(observation, obj).entries, expected) < 1e-10


def test_general_and_shrinkage_sure_agree(observations, dims):
    for c in (stein_coeffs(dims), efron_morris_coeffs(dims), [3.0, 0.5, 1.0]):
        for X in observations:
            general = sure_matrix_general(X, log_objective(c)).entries
            shrinkage = sure_matrix_shrinkage(X, c).entries
            assert relative_error(general, shrinkage) < 1e-10


def test_stein_simplification_agrees_with_shrinkage(observations, wide_observation):
    for X in observations + [wide_observation]:
        dims = ProblemDims.of(X)
        stein = sure_matrix_stein(X, dims)
        assert relative_error(stein.entries, sure_matrix_shrinkage(X, stein_coeffs(dims)).entries) < 1e-10


def test_frobenius_forms_agree_with_trace(observations, dims):
    objectives = [efron_morris_objective(dims), polynomial_objective([[0.1, 0.01], [0.0, -0.02], [0.3, 0.0]])]
    for obj in objectives:
        for X in observations:
            trace = sure_matrix_general(X, obj).frobenius
            assert sure_frobenius(X, obj, form='pairwise') == pytest.approx(trace, rel=1e-10)
            assert sure_frobenius(X, obj, form='reduced') == pytest.approx(trace, rel=1e-10)


def test_sure_frobenius_on_stack(rng, dims):
    obj = efron_morris_objective(dims)
    X = rng.standard_normal((50, 10, 3))
    batch = sure_frobenius(X, obj)
    assert batch.shape == (50,)
    assert batch[7] == pytest.approx(sure_frobenius(X[7], obj), rel=1e-12)


def test_sure_frobenius_rejects_unknown_form(observation, dims):
    with pytest.raises(ValueError):
        sure_frobenius(observation, efron_morris_objective(dims), form='other')


def test_stein_certificate_when_n_is_large(observations):
    for X in observations:
        sure = sure_matrix_stein(X)
        assert np.all(sure.diagonal.d < 0)
        assert largest_eigenvalue(sure.entries - 10 * np.eye(3)) < 0


def test_stein_sure_closed_form_small_case():
    X = np.zeros((4, 2))
    X[0, 0], X[1, 1] = 2.0, 1.0
    # λ = (4, 1), c = (3, 1), n = 4
    d = sure_matrix_stein(X).diagonal.d
    np.testing.assert_allclose(d, [3.0 / 4.0 - 4.0 / 3.0, -1.0 - 4.0 / 3.0])


def test_sure_rejects_degenerate_spectrum():
    X = np.zeros((5, 3))
    X[:3, :3] = np.diag([2.0, 2.0, 1.0])
    with pytest.raises(DegenerateSpectrumError):
        sure_matrix_stein(X)
    with pytest.raises(DegenerateSpectrumError):
        sure_matrix_shrinkage(X, [1.0, 1.0, 1.0])

    rank_deficient = np.zeros((5, 3))
    rank_deficient[:3, :3] = np.diag([3.0, 2.0, 0.0])
    with pytest.raises(DegenerateSpectrumError):
        sure_matrix_stein(rank_deficient)


def test_smooth_objective_allows_zero_eigenvalue():
    X = np.zeros((5, 3))
    X[:3, :3] = np.diag([3.0, 2.0, 0.0])
    sure = sure_matrix_general(X, polynomial_objective([[0.1], [0.1], [0.1]]))
    assert np.all(np.isfinite(sure.entries))


def test_sure_checks_dimensions(observation):
    with pytest.raises(InvalidDimensionsError):
        sure_matrix_stein(observation, ProblemDims(8, 3))
    with pytest.raises(InvalidDimensionsError):
        sure_matrix_shrinkage(observation, [1.0, 2.0])
    with pytest.raises(InvalidDimensionsError):
        sure_matrix_stein(np.eye(3))


def test_sure_is_orthogonally_equivariant(observation, rng):
    P = ortho_group.rvs(10, random_state=rng)
    Q = ortho_group.rvs(3, random_state=rng)
    rotated = sure_matrix_stein(P @ observation @ Q).entries
    assert relative_error(rotated, Q.T @ sure_matrix_stein(observation).entries @ Q) < 1e-9


@pytest.mark.parametrize("label", ['mle', 'em', 'stein', 'custom:3,0.5,1'])
def test_numeric_divergence_matches_closed_form(observations, dims, label):
    est = resolve_estimator(label, dims)
    obj = est.sure_objective()
    for X in observations[:3]:
        numeric = divergence_sure_numeric(X, est, dims)
        assert not numeric.near_kink
        assert relative_error(numeric.entries, sure_matrix_general(X, obj).entries) < 1e-4


def test_numeric_divergence_flags_clipping_boundary(dims):
    X = np.zeros((10, 3))
    X[:3, :3] = np.diag([np.sqrt(10.0), 2.0, 1.0])
    numeric = divergence_sure_numeric(X, resolve_estimator('stein+', dims), dims)
    assert numeric.near_kink
    assert kink_proximity(X, stein_coeffs(dims))
    assert not kink_proximity(X, [1.0, 1.0, 4.0])


def test_positive_part_sure_is_finite_away_from_boundary(observation, dims):
    numeric = divergence_sure_numeric(observation, resolve_estimator('em+', dims), dims)
    assert np.all(np.isfinite(numeric.entries))
    np.testing.assert_allclose(numeric.entries, numeric.entries.T)


def test_em_zero_mean_exact_risk():
    np.testing.assert_allclose(em_zero_mean_exact_risk(ProblemDims(10, 3)), 4 * np.eye(3))
    np.testing.assert_allclose(em_zero_mean_exact_risk(ProblemDims(6, 2)), 3 * np.eye(2))
    with pytest.raises(InvalidDimensionsError):
        em_zero_mean_exact_risk(ProblemDims(4, 3))


def test_largest_eigenvalue():
    assert largest_eigenvalue(np.diag([1.0, -2.0, 0.5])) == pytest.approx(1.0)
    assert largest_eigenvalue([[0.0, 1.0], [1.0, 0.0]]) == pytest.approx(1.0)
