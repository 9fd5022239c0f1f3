"""Estimator zoo: MLE, pseudo-Bayes, spectral shrinkage and positive-part variants"""
from .shrinkage import (
    EstimatorKind,
    EstimatorSpec,
    ShrinkageCoefficients,
    efron_morris,
    efron_morris_coeffs,
    log_objective,
    mle,
    positive_part_shrinkage,
    pseudo_bayes,
    spectral_shrinkage,
    stein_coeffs
)
from .registry import ESTIMATOR_LABELS, resolve_estimator

__all__ = [
    'EstimatorKind',
    'EstimatorSpec',
    'ShrinkageCoefficients',
    'efron_morris',
    'efron_morris_coeffs',
    'log_objective',
    'mle',
    'positive_part_shrinkage',
    'pseudo_bayes',
    'spectral_shrinkage',
    'stein_coeffs',
    'ESTIMATOR_LABELS',
    'resolve_estimator'
]
