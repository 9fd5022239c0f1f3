import numpy as np
import pytest

from orthoshrink.estimators import (
    EstimatorKind,
    ShrinkageCoefficients,
    efron_morris,
    efron_morris_coeffs,
    log_objective,
    mle,
    positive_part_shrinkage,
    pseudo_bayes,
    resolve_estimator,
    spectral_shrinkage,
    stein_coeffs
)
from orthoshrink.exceptions import EstimatorLabelError, InvalidDimensionsError, SingularityError
from orthoshrink.invariant_calculus import zero_objective
from orthoshrink.spectral import ProblemDims, thin_svd


def _diag_observation(n, values):
    X = np.zeros((n, len(values)))
    X[:len(values), :len(values)] = np.diag(values)
    return X


def test_coefficient_rules():
    np.testing.assert_array_equal(efron_morris_coeffs(ProblemDims(10, 3)).c, [6.0, 6.0, 6.0])
    np.testing.assert_array_equal(stein_coeffs(ProblemDims(10, 3)).c, [10.0, 8.0, 6.0])
    np.testing.assert_array_equal(stein_coeffs(ProblemDims(5, 3)).c, [5.0, 3.0, 1.0])
    np.testing.assert_array_equal(stein_coeffs(ProblemDims(4, 3)).c, [4.0, 2.0, 0.0])


def test_efron_morris_needs_enough_rows():
    with pytest.raises(InvalidDimensionsError):
        efron_morris_coeffs(ProblemDims(4, 3))
    with pytest.raises(InvalidDimensionsError):
        stein_coeffs(ProblemDims(3, 3))


def test_coefficients_must_be_nonnegative():
    with pytest.raises(ValueError):
        ShrinkageCoefficients([1.0, -1.0])
    with pytest.raises(ValueError):
        ShrinkageCoefficients([np.nan])
    with pytest.raises(ValueError):
        ShrinkageCoefficients([])


def test_mle_returns_a_copy(observation):
    estimate = mle(observation)
    np.testing.assert_array_equal(estimate, observation)
    estimate[0, 0] += 1.0
    assert estimate[0, 0] != observation[0, 0]


def test_spectral_shrinkage_example():
    X = _diag_observation(3, [2.0, 1.0])
    np.testing.assert_allclose(spectral_shrinkage(X, [1.0, 1.0]), _diag_observation(3, [1.5, 0.0]), atol=1e-12)


def test_spectral_shrinkage_zero_coefficients_is_identity(observation):
    np.testing.assert_allclose(spectral_shrinkage(observation, [0.0, 0.0, 0.0]), observation, atol=1e-12)


def test_spectral_shrinkage_rejects_zero_singular_value():
    X = _diag_observation(4, [2.0, 0.0])
    with pytest.raises(SingularityError):
        spectral_shrinkage(X, [1.0, 1.0])
    np.testing.assert_allclose(spectral_shrinkage(X, [1.0, 0.0]), _diag_observation(4, [1.5, 0.0]), atol=1e-12)


def test_tiny_singular_values_count_as_zero():
    X = _diag_observation(4, [2.0, 1e-310])
    with pytest.raises(SingularityError):
        spectral_shrinkage(X, [1.0, 1.0])
    shrunk = positive_part_shrinkage(X, [1.0, 1.0])
    assert np.all(np.isfinite(shrunk))
    np.testing.assert_allclose(shrunk, _diag_observation(4, [1.5, 0.0]), atol=1e-12)


def test_spectral_shrinkage_checks_dimensions(observation):
    with pytest.raises(InvalidDimensionsError):
        spectral_shrinkage(observation, [1.0, 1.0])


def test_positive_part_clips_overshoot():
    X = _diag_observation(3, [2.0, 1.0])
    np.testing.assert_allclose(positive_part_shrinkage(X, [1.0, 4.0]), _diag_observation(3, [1.5, 0.0]), atol=1e-12)
    np.testing.assert_allclose(spectral_shrinkage(X, [1.0, 4.0]), _diag_observation(3, [1.5, -3.0]), atol=1e-12)


def test_positive_part_keeps_zero_singular_value():
    X = _diag_observation(4, [2.0, 0.0])
    np.testing.assert_allclose(positive_part_shrinkage(X, [1.0, 1.0]), _diag_observation(4, [1.5, 0.0]), atol=1e-12)


def test_positive_part_singular_values_are_clipped(observation, dims):
    c = stein_coeffs(dims)
    svd = thin_svd(observation)
    expected = np.maximum(svd.singular_values - c.c / svd.singular_values, 0.0)
    shrunk = np.linalg.svd(positive_part_shrinkage(observation, c), compute_uv=False)
    np.testing.assert_allclose(np.sort(shrunk), np.sort(expected), atol=1e-10)


def test_shrinkage_on_stack(rng, dims):
    X = rng.standard_normal((7, 10, 3))
    stacked = spectral_shrinkage(X, stein_coeffs(dims))
    for i in range(7):
        np.testing.assert_allclose(stacked[i], spectral_shrinkage(X[i], stein_coeffs(dims)), atol=1e-12)


def test_log_objective_value():
    obj = log_objective([2.0, 0.0])
    assert obj.value(np.array([np.e, 5.0])) == pytest.approx(-1.0)
    assert obj.singular
    assert not log_objective([0.0, 0.0]).singular


def test_pseudo_bayes_with_log_objective_is_shrinkage(observations, dims):
    c = stein_coeffs(dims)
    for X in observations:
        np.testing.assert_allclose(pseudo_bayes(X, log_objective(c)), spectral_shrinkage(X, c), atol=1e-10)


def test_efron_morris_closed_form_agrees(observations, dims):
    for X in observations:
        np.testing.assert_allclose(efron_morris(X), spectral_shrinkage(X, efron_morris_coeffs(dims)), atol=1e-10)


def test_pseudo_bayes_with_zero_objective_is_mle(observation):
    np.testing.assert_allclose(pseudo_bayes(observation, zero_objective()), observation)


@pytest.mark.parametrize("label, kind, coefficients", [
    ('mle', EstimatorKind.MLE, None),
    ('em', EstimatorKind.SHRINKAGE, [6.0, 6.0, 6.0]),
    ('stein', EstimatorKind.SHRINKAGE, [10.0, 8.0, 6.0]),
    ('em+', EstimatorKind.POSITIVE_PART, [6.0, 6.0, 6.0]),
    ('stein+', EstimatorKind.POSITIVE_PART, [10.0, 8.0, 6.0]),
    ('custom:1,2,3', EstimatorKind.SHRINKAGE, [1.0, 2.0, 3.0]),
    ('custom+:1,2,3', EstimatorKind.POSITIVE_PART, [1.0, 2.0, 3.0]),
])
def test_resolve_estimator(dims, label, kind, coefficients):
    est = resolve_estimator(label, dims)
    assert est.kind is kind
    assert est.label == label
    if coefficients is None:
        assert est.coefficients is None
    else:
        np.testing.assert_array_equal(est.coefficients.c, coefficients)


def test_custom_estimator_matches_builtin(dims, observation):
    custom = resolve_estimator('custom:6,6,6', dims)
    np.testing.assert_allclose(custom.apply(observation), resolve_estimator('em', dims).apply(observation))


@pytest.mark.parametrize("label", ['foo', 'custom:', 'custom:1,x,3', 'custom:1,-2,3', 'steinn',
                                   'stein++', 'em+++', '+', 'custom:1,2,3+'])
def test_resolve_estimator_rejects_unknown_labels(dims, label):
    with pytest.raises(EstimatorLabelError) as info:
        resolve_estimator(label, dims)
    assert 'stein' in info.value.valid_labels


def test_resolve_estimator_checks_dimensions(dims):
    with pytest.raises(InvalidDimensionsError):
        resolve_estimator('custom:1,2', dims)
    with pytest.raises(InvalidDimensionsError):
        resolve_estimator('em', ProblemDims(4, 3))


def test_sure_objective_availability(dims):
    assert resolve_estimator('mle', dims).sure_objective() is not None
    assert resolve_estimator('stein', dims).sure_objective().singular
    assert resolve_estimator('stein+', dims).sure_objective() is None
    assert resolve_estimator('stein', dims).needs_gap
    assert not resolve_estimator('stein+', dims).needs_gap
    assert resolve_estimator('em+', dims).is_positive_part
