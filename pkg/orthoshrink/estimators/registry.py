"""Estimator registry keyed by the labels used on the command line"""
from ..exceptions import ConfigError, EstimatorLabelError, InvalidDimensionsError
from ..spectral import ProblemDims
from ..utils.helpers import parse_float_list
from .shrinkage import (
    EstimatorKind,
    EstimatorSpec,
    ShrinkageCoefficients,
    efron_morris_coeffs,
    stein_coeffs
)

ESTIMATOR_LABELS = ('mle', 'em', 'stein', 'em+', 'stein+', 'custom:c1,...,cp', 'custom+:c1,...,cp')

_COEFFICIENT_RULES = {
    'em': efron_morris_coeffs,
    'stein': stein_coeffs,
}


def resolve_estimator(label: str, dims: ProblemDims) -> EstimatorSpec:
    """
    Build the estimator a label names, for the given dimensions

    Args:
        label (str): One of ESTIMATOR_LABELS; custom forms carry p numbers
        dims (ProblemDims): Problem dimensions the coefficients depend on

    Returns:
        EstimatorSpec: Resolved estimator

    Raises:
        EstimatorLabelError: Unknown label or malformed custom coefficients
        InvalidDimensionsError: Coefficients undefined for these dimensions
    """
    label = str(label).strip()
    if label == 'mle':
        return EstimatorSpec(EstimatorKind.MLE, label)

    if label in _COEFFICIENT_RULES:
        return EstimatorSpec(EstimatorKind.SHRINKAGE, label, coefficients=_COEFFICIENT_RULES[label](dims))
    if label.endswith('+') and label[:-1] in _COEFFICIENT_RULES:
        return EstimatorSpec(EstimatorKind.POSITIVE_PART, label,
                             coefficients=_COEFFICIENT_RULES[label[:-1]](dims))

    for prefix, kind in (('custom:', EstimatorKind.SHRINKAGE), ('custom+:', EstimatorKind.POSITIVE_PART)):
        if label.startswith(prefix):
            try:
                values = parse_float_list(label[len(prefix):])
                coefficients = ShrinkageCoefficients(values)
            except (ConfigError, ValueError) as exc:
                raise EstimatorLabelError(label, ESTIMATOR_LABELS) from exc
            if coefficients.p != dims.p:
                raise InvalidDimensionsError(
                    f"'{label}' has {coefficients.p} coefficients but p={dims.p}"
                )
            return EstimatorSpec(kind, label, coefficients=coefficients)

    raise EstimatorLabelError(label, ESTIMATOR_LABELS)
