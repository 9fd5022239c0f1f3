"""
Risk module
Unbiased risk estimates (SURE) for orthogonally invariant estimators
"""
from .sure import (
    DIVERGENCE_STEP,
    RiskDiagonal,
    SureMatrix,
    assemble_sure,
    divergence_sure_numeric,
    efron_morris_objective,
    em_zero_mean_exact_risk,
    general_risk_diagonal,
    kink_proximity,
    largest_eigenvalue,
    shrinkage_risk_diagonal,
    stein_risk_diagonal,
    sure_frobenius,
    sure_matrix_general,
    sure_matrix_shrinkage,
    sure_matrix_stein
)

__all__ = [
    'DIVERGENCE_STEP',
    'RiskDiagonal',
    'SureMatrix',
    'assemble_sure',
    'divergence_sure_numeric',
    'efron_morris_objective',
    'em_zero_mean_exact_risk',
    'general_risk_diagonal',
    'kink_proximity',
    'largest_eigenvalue',
    'shrinkage_risk_diagonal',
    'stein_risk_diagonal',
    'sure_frobenius',
    'sure_matrix_general',
    'sure_matrix_shrinkage',
    'sure_matrix_stein'
]
