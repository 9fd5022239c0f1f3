"""
Cross-checks of every analytic derivative and risk formula.

Finite-difference checks compare analytic derivatives against central
differences on random Gaussian observations. Identity checks compare
formulas that must agree exactly, on batches of random observations.

Formulas are looked up through their modules at call time (for example
`risk.sure_matrix_stein`), so a replaced attribute is what gets checked.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.stats import ortho_group

from .. import estimators, risk
from .. import invariant_calculus as calculus
from ..exceptions import NumericError
from ..montecarlo import substream
from ..spectral import ProblemDims, eigen_gap_check, gap_mask, gram_spectral
from ..utils.helpers import relative_error

logger = logging.getLogger(__name__)

FIRST_ORDER_TOL = 1e-5
PROJECTOR_TOL = 1e-4
SECOND_ORDER_TOL = 1e-3
DIVERGENCE_TOL = 1e-4
IDENTITY_TOL = 1e-10
CERTIFICATE_TOL = 1e-12

FD_GAP_TOL = 1e-4
FD_SEPARATION = 1e-2
IDENTITY_SEPARATION = 1e-6
IDENTITY_FACTOR = 100
MAX_DRAW_ATTEMPTS = 50

REPORT_COLUMNS = ['check', 'max_error', 'tolerance', 'passed', 'skipped', 'detail']


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float
    passed: bool
    skipped: bool = False
    detail: str = ''

    @classmethod
    def skip(cls, name: str, tolerance: float, detail: str) -> 'CheckResult':
        return cls(name, float('nan'), tolerance, True, skipped=True, detail=detail)


@dataclass
class VerificationReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def failures(self) -> list:
        return [result for result in self.results if not result.passed]

    def to_frame(self) -> pd.DataFrame:
        """One row per check, in run order."""
        rows = [(r.name, r.max_error, r.tolerance, r.passed, r.skipped, r.detail) for r in self.results]
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)

    def render(self) -> str:
        lines = ["=" * 60, "VERIFICATION REPORT", "=" * 60]
        for result in self.results:
            if result.skipped:
                lines.append(f"⏭️  {result.name}: skipped ({result.detail})")
                continue
            marker = "✅" if result.passed else "❌"
            lines.append(f"{marker} {result.name}: max error {result.max_error:.3e} (tolerance {result.tolerance:.0e})")
        lines.append("=" * 60)
        failed = len(self.failures())
        lines.append(f"{len(self.results) - failed}/{len(self.results)} checks passed")
        return "\n".join(lines)


def _result(name: str, errors, tolerance: float) -> CheckResult:
    errors = np.atleast_1d(np.asarray(errors, dtype=np.float64))
    max_error = float(np.max(errors)) if errors.size else 0.0
    passed = bool(np.isfinite(max_error) and max_error <= tolerance)
    if not passed:
        logger.warning("check %s failed: %.3e > %.0e", name, max_error, tolerance)
    return CheckResult(name, max_error, tolerance, passed)


def _batch_rel_error(actual, expected) -> np.ndarray:
    """Per-sample max deviation scaled by max(|expected|, 1) of that sample."""
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    axes = tuple(range(1, expected.ndim))
    scale = np.maximum(np.max(np.abs(expected), axis=axes), 1.0)
    return np.max(np.abs(actual - expected), axis=axes) / scale


def _separated(lam, separation: float) -> bool:
    gaps = np.append(lam[:-1] - lam[1:], lam[-1]) / lam[0]
    return bool(np.min(gaps) >= separation)


def fd_observations(dims: ProblemDims, count: int, gen: np.random.Generator) -> list:
    """
    Gaussian observations whose spectra are well separated for central
    differences: gap check at 1e-4 and every relative gap (λ_p included)
    at least 1e-2
    """
    kept = []
    for _ in range(count * MAX_DRAW_ATTEMPTS):
        X = gen.standard_normal((dims.n, dims.p))
        lam = gram_spectral(X).eigenvalues
        if eigen_gap_check(lam, FD_GAP_TOL).ok and _separated(lam, FD_SEPARATION):
            kept.append(X)
            if len(kept) == count:
                return kept
    raise NumericError(f"could not draw {count} well-separated {dims} observations")


def identity_observations(dims: ProblemDims, count: int, gen: np.random.Generator) -> np.ndarray:
    """Stack of up to `count` Gaussian observations passing a mild separation filter."""
    X = gen.standard_normal((count, dims.n, dims.p))
    lam = gram_spectral(X).eigenvalues
    return X[gap_mask(lam, IDENTITY_SEPARATION)]


def _objectives(dims: ProblemDims, gen: np.random.Generator) -> list:
    """(name, objective) pairs defined at these dimensions."""
    objectives = [
        ('trace', calculus.trace_objective()),
        ('polynomial', calculus.polynomial_objective(gen.uniform(-0.1, 0.1, size=(dims.p, 3)))),
    ]
    if dims.n - dims.p - 1 > 0:
        objectives.append(('efron_morris', estimators.log_objective(estimators.efron_morris_coeffs(dims))))
    if dims.n >= dims.p + 1:
        objectives.append(('stein', estimators.log_objective(estimators.stein_coeffs(dims))))
    return objectives


def _smooth_objectives(dims: ProblemDims) -> list:
    """Objectives symmetric in λ, hence smooth across eigenvalue crossings."""
    objectives = [('trace', calculus.trace_objective())]
    if dims.n - dims.p - 1 > 0:
        objectives.append(('efron_morris', estimators.log_objective(estimators.efron_morris_coeffs(dims))))
    return objectives


def _coefficient_sets(dims: ProblemDims, gen: np.random.Generator) -> list:
    sets = [('random', estimators.ShrinkageCoefficients(gen.uniform(0.0, dims.n, size=dims.p)))]
    if dims.n - dims.p - 1 > 0:
        sets.append(('efron_morris', estimators.efron_morris_coeffs(dims)))
    if dims.n >= dims.p + 1:
        sets.append(('stein', estimators.stein_coeffs(dims)))
    return sets


def check_lambda_gradient(dims, draws) -> CheckResult:
    errors = []
    for X in draws:
        sp = gram_spectral(X)
        for i in range(1, dims.p + 1):
            fd = calculus.fd_gradient(X, lambda Y, i=i: gram_spectral(Y).eigenvalues[i - 1])
            errors.append(relative_error(calculus.lambda_gradient(X, sp, i), fd))
    return _result(f"lambda_gradient[{dims}]", errors, FIRST_ORDER_TOL)


def check_projector_jacobian(dims, draws) -> CheckResult:
    errors = []
    for X in draws:
        sp = gram_spectral(X)
        for j in range(1, dims.p + 1):
            for a in range(1, dims.n + 1):
                for k in range(1, dims.p + 1):
                    fd = calculus.fd_matrix_derivative(X, lambda Y, j=j: gram_spectral(Y).projector(j), a, k)
                    errors.append(float(np.max(np.abs(calculus.projector_jacobian(X, sp, j, a, k) - fd))))
    return _result(f"projector_jacobian[{dims}]", errors, PROJECTOR_TOL)


def check_matrix_gradient(dims, draws, objectives) -> list:
    results = []
    for name, obj in objectives:
        errors = []
        for X in draws:
            fd = calculus.fd_gradient(X, lambda Y: obj.value(gram_spectral(Y).eigenvalues))
            errors.append(relative_error(calculus.matrix_gradient_invariant(X, obj), fd))
        results.append(_result(f"matrix_gradient[{name}, {dims}]", errors, FIRST_ORDER_TOL))
    return results


def check_matrix_laplacian(dims, draws) -> list:
    results = []
    for name, obj in _smooth_objectives(dims):
        errors = []
        for X in draws:
            fd = calculus.fd_matrix_laplacian(X, lambda Y: obj.value(gram_spectral(Y).eigenvalues))
            errors.append(float(np.max(np.abs(calculus.matrix_laplacian_invariant(X, obj) - fd))))
        results.append(_result(f"matrix_laplacian[{name}, {dims}]", errors, SECOND_ORDER_TOL))
    return results


def check_divergence_sure(dims, draws) -> CheckResult:
    name = f"divergence_sure[{dims}]"
    if dims.n - dims.p - 1 <= 0:
        return CheckResult.skip(name, DIVERGENCE_TOL, "Efron-Morris needs n > p + 1")
    est = estimators.resolve_estimator('em', dims)
    errors = []
    for X in draws:
        numeric = risk.divergence_sure_numeric(X, est, dims)
        analytic = risk.sure_matrix_shrinkage(X, est.coefficients, dims)
        errors.append(float(np.max(np.abs(numeric.entries - analytic.entries))))
    return _result(name, errors, DIVERGENCE_TOL)


def check_objective_partials(dims, draws, objectives) -> CheckResult:
    errors = []
    for _, obj in objectives:
        for X in draws[:10]:
            errors.extend(calculus.check_objective_consistency(obj, gram_spectral(X).eigenvalues))
    return _result(f"objective_partials[{dims}]", errors, FIRST_ORDER_TOL)


def check_lambda_pair_identity(dims, X) -> CheckResult:
    lhs, rhs = calculus.lambda_pair_identity(gram_spectral(X).eigenvalues)
    return _result(f"lambda_pair_identity[{dims}]", _batch_rel_error(lhs, rhs), IDENTITY_TOL)


def check_gram_and_laplacian_trace(dims, X, objectives) -> list:
    gram_errors, trace_errors = [], []
    for _, obj in objectives:
        grad = calculus.matrix_gradient_invariant(X, obj)
        explicit = np.swapaxes(grad, -1, -2) @ grad
        gram_errors.append(_batch_rel_error(calculus.gradient_gram(X, obj), explicit))
        laplacian = calculus.matrix_laplacian_invariant(X, obj)
        trace = np.trace(laplacian, axis1=-2, axis2=-1)
        trace_errors.append(_batch_rel_error(calculus.scalar_laplacian_invariant(X, obj)[:, None], trace[:, None]))
    return [_result(f"gradient_gram[{dims}]", np.concatenate(gram_errors), IDENTITY_TOL),
            _result(f"laplacian_trace[{dims}]", np.concatenate(trace_errors), IDENTITY_TOL)]


def check_general_sure(dims, X, objectives) -> list:
    composite_errors, frobenius_errors = [], []
    for _, obj in objectives:
        sure = risk.sure_matrix_general(X, obj, dims).entries
        composite = (dims.n * np.eye(dims.p) + 2.0 * calculus.matrix_laplacian_invariant(X, obj)
                     + calculus.gradient_gram(X, obj))
        composite_errors.append(_batch_rel_error(sure, composite))
        trace = np.trace(sure, axis1=-2, axis2=-1)[:, None]
        for form in ('pairwise', 'reduced'):
            frobenius = np.atleast_1d(risk.sure_frobenius(X, obj, dims, form=form))[:, None]
            frobenius_errors.append(_batch_rel_error(frobenius, trace))
    return [_result(f"sure_general_composite[{dims}]", np.concatenate(composite_errors), IDENTITY_TOL),
            _result(f"sure_frobenius_trace[{dims}]", np.concatenate(frobenius_errors), IDENTITY_TOL)]


def check_shrinkage_sure(dims, X, coefficient_sets) -> CheckResult:
    errors = []
    for _, c in coefficient_sets:
        shrinkage = risk.sure_matrix_shrinkage(X, c, dims).entries
        general = risk.sure_matrix_general(X, estimators.log_objective(c), dims).entries
        errors.append(_batch_rel_error(shrinkage, general))
    return _result(f"sure_shrinkage_vs_general[{dims}]", np.concatenate(errors), IDENTITY_TOL)


def check_stein_sure(dims, X) -> CheckResult:
    name = f"sure_stein_vs_shrinkage[{dims}]"
    if dims.n < dims.p + 1:
        return CheckResult.skip(name, IDENTITY_TOL, "Stein's coefficients need n >= p + 1")
    stein = risk.sure_matrix_stein(X, dims).entries
    shrinkage = risk.sure_matrix_shrinkage(X, estimators.stein_coeffs(dims), dims).entries
    return _result(name, _batch_rel_error(stein, shrinkage), IDENTITY_TOL)


def check_stein_certificate(dims, X) -> CheckResult:
    name = f"stein_domination_certificate[{dims}]"
    if dims.n < 3 * dims.p - 1:
        return CheckResult.skip(name, CERTIFICATE_TOL, "needs n >= 3p - 1")
    d = risk.stein_risk_diagonal(gram_spectral(X).eigenvalues, dims.n)
    return _result(name, np.maximum(np.max(d, axis=-1), 0.0), CERTIFICATE_TOL)


def check_estimator_forms(dims, X) -> CheckResult:
    name = f"efron_morris_forms[{dims}]"
    if dims.n - dims.p - 1 <= 0:
        return CheckResult.skip(name, IDENTITY_TOL, "Efron-Morris needs n > p + 1")
    c = estimators.efron_morris_coeffs(dims)
    closed = estimators.efron_morris(X)
    errors = [_batch_rel_error(estimators.spectral_shrinkage(X, c), closed),
              _batch_rel_error(estimators.pseudo_bayes(X, estimators.log_objective(c)), closed)]
    return _result(name, np.concatenate(errors), IDENTITY_TOL)


def _haar(dim: int, gen: np.random.Generator) -> np.ndarray:
    if dim == 1:
        return np.ones((1, 1))
    return ortho_group.rvs(dim, random_state=gen)


def check_orthogonal_equivariance(dims, draws, gen) -> CheckResult:
    """S(PXQ) = Qᵀ S(X) Q and M̂(PXQ) = P M̂(X) Q for Haar-random P, Q."""
    obj = dict(_objectives(dims, gen)).get('stein', calculus.trace_objective())
    c = estimators.ShrinkageCoefficients(np.full(dims.p, 1.0))
    errors = []
    for X in draws:
        P = _haar(dims.n, gen)
        Q = _haar(dims.p, gen)
        Y = P @ X @ Q
        sure_x = risk.sure_matrix_general(X, obj, dims).entries
        sure_y = risk.sure_matrix_general(Y, obj, dims).entries
        errors.append(relative_error(sure_y, Q.T @ sure_x @ Q))
        errors.append(relative_error(estimators.spectral_shrinkage(Y, c), P @ estimators.spectral_shrinkage(X, c) @ Q))
    return _result(f"orthogonal_equivariance[{dims}]", errors, IDENTITY_TOL)


def run_verification(dims_list, trials: int = 100, seed: int = 42) -> VerificationReport:
    """
    Run the full derivative and identity suite at each problem size

    Args:
        dims_list (list[ProblemDims]): Sizes to check
        trials (int): Finite-difference draws per size; identity checks
            use 100 times as many
        seed (int): Seed of the draw streams

    Returns:
        VerificationReport: One CheckResult per check and size
    """
    report = VerificationReport()
    for index, dims in enumerate(dims_list):
        logger.info("verifying %s with %d trials", dims, trials)
        gen = substream(seed, index)
        objectives = _objectives(dims, gen)
        draws = fd_observations(dims, trials, gen)
        X = identity_observations(dims, trials * IDENTITY_FACTOR, gen)

        report.results.append(check_lambda_gradient(dims, draws))
        report.results.append(check_projector_jacobian(dims, draws))
        report.results.extend(check_matrix_gradient(dims, draws, objectives))
        report.results.extend(check_matrix_laplacian(dims, draws))
        report.results.append(check_divergence_sure(dims, draws))
        report.results.append(check_objective_partials(dims, draws, objectives))

        report.results.append(check_lambda_pair_identity(dims, X))
        report.results.extend(check_gram_and_laplacian_trace(dims, X, objectives))
        report.results.extend(check_general_sure(dims, X, objectives))
        report.results.append(check_shrinkage_sure(dims, X, _coefficient_sets(dims, gen)))
        report.results.append(check_stein_sure(dims, X))
        report.results.append(check_stein_certificate(dims, X))
        report.results.append(check_estimator_forms(dims, X))
        report.results.append(check_orthogonal_equivariance(dims, draws[:10], gen))
    return report
