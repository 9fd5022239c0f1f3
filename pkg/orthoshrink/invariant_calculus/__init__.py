"""Matrix calculus for orthogonally invariant functions"""
from .objectives import (
    InvariantObjective,
    check_objective_consistency,
    log_det_objective,
    polynomial_objective,
    trace_objective,
    zero_objective
)
from .derivatives import (
    eigenvector_derivative,
    gradient_gram,
    lambda_gradient,
    lambda_pair_identity,
    laplacian_diagonal,
    matrix_gradient_invariant,
    matrix_laplacian_invariant,
    projector_jacobian,
    scalar_laplacian_invariant
)
from .finite_difference import (
    FIRST_ORDER_STEP,
    SECOND_ORDER_STEP,
    fd_gradient,
    fd_matrix_derivative,
    fd_matrix_divergence,
    fd_matrix_laplacian
)

__all__ = [
    'InvariantObjective',
    'check_objective_consistency',
    'log_det_objective',
    'polynomial_objective',
    'trace_objective',
    'zero_objective',
    'eigenvector_derivative',
    'gradient_gram',
    'lambda_gradient',
    'lambda_pair_identity',
    'laplacian_diagonal',
    'matrix_gradient_invariant',
    'matrix_laplacian_invariant',
    'projector_jacobian',
    'scalar_laplacian_invariant',
    'FIRST_ORDER_STEP',
    'SECOND_ORDER_STEP',
    'fd_gradient',
    'fd_matrix_derivative',
    'fd_matrix_divergence',
    'fd_matrix_laplacian'
]
