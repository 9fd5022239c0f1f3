"""Command implementations; each returns a process exit status"""
from __future__ import annotations

import logging
import sys

import numpy as np
import pandas as pd

from ..analytics import check_positive_part, summarize_domination, summarize_sweep
from ..estimators import resolve_estimator
from ..export import (
    appendix_to_frame,
    estimate_record,
    export_csv,
    export_json,
    sweep_columns,
    sweep_to_frame,
    write_table
)
from ..montecarlo import (
    FIGURE_PRESETS,
    MeanSpec,
    SweepSpec,
    appendix_sweep,
    mc_matrix_risk,
    mc_sure_agreement,
    resize_preset,
    run_sweep
)
from ..spectral import ProblemDims
from ..utils.helpers import format_significant, parse_grid
from . import verification
from .config import AppendixConfig, RiskConfig, SweepConfig, VerifyConfig

logger = logging.getLogger(__name__)


def _emit(frame, config, extra=None) -> None:
    """Write to --out in the chosen format, or print CSV or JSON to stdout."""
    if config.out is None:
        sys.stdout.write(export_json(frame, extra) + "\n" if config.format == 'json' else export_csv(frame))
        return
    path = write_table(frame, config.out, config.format, extra)
    logger.info("wrote %d rows to %s", len(frame), path)


def _matrix_lines(title: str, matrix) -> list:
    lines = [title]
    for row in np.atleast_2d(matrix):
        lines.append("  " + "  ".join(f"{format_significant(value):>12}" for value in row))
    return lines


def cmd_verify(config: VerifyConfig) -> int:
    """Run the derivative and identity suite; exit 1 if any check fails."""
    report = verification.run_verification(config.problem_dims(), config.trials, config.seed)
    print(report.render())
    for failure in report.failures():
        print(f"❌ FAILED: {failure.name}", file=sys.stderr)
    if config.out is not None:
        path = write_table(report.to_frame(), config.out, config.format)
        logger.info("wrote %d checks to %s", len(report.results), path)
    return 0 if report.passed else 1


def cmd_risk(config: RiskConfig) -> int:
    """
    Monte Carlo risk at one mean, printed next to the averaged analytic
    SURE when the estimator has one
    """
    dims = config.dims
    est = resolve_estimator(config.estimator, dims)
    spec = MeanSpec.from_unsorted(dims, config.sigma)
    objective = est.sure_objective()
    agreement = None
    if objective is not None:
        agreement = mc_sure_agreement(spec, objective, config.reps, config.seed, config.threads, est.label)
        estimate = agreement.risk
    else:
        estimate = mc_matrix_risk(spec, est, config.reps, config.seed, config.threads)

    lines = ["=" * 60, f"RISK: {est.label} at {spec}", "=" * 60]
    lines += _matrix_lines("Risk matrix (mean loss):", estimate.mean)
    lines += _matrix_lines("Entrywise standard errors:", estimate.stderr)
    lines.append("Eigenvalues: " + ", ".join(
        f"{format_significant(v)} ± {format_significant(se)}"
        for v, se in zip(estimate.eigenvalues, estimate.eigenvalue_stderr)))
    lines.append(f"Frobenius risk: {format_significant(estimate.frobenius)} ± "
                 f"{format_significant(estimate.frobenius_stderr)}")
    if agreement is not None:
        lines += _matrix_lines("Averaged SURE:", agreement.sure_mean)
        lines.append(f"Max |loss − SURE| z-score: {agreement.max_z:.2f}")
    else:
        lines.append("No analytic SURE for this estimator")
    lines.append(f"Reps: {estimate.reps}  Seed: {estimate.seed}  Rejects: {estimate.rejects}")
    print("\n".join(lines))

    if config.out is not None:
        frame = _single_row_frame(spec, estimate)
        extra = {
            'sigma': list(spec.singular_values),
            'mean': estimate.mean,
            'stderr': estimate.stderr,
            'sure_mean': None if agreement is None else agreement.sure_mean
        }
        write_table(frame, config.out, config.format, extra)
    return 0


def _single_row_frame(spec: MeanSpec, estimate):
    record = estimate_record(spec.singular_values[0], estimate)
    return pd.DataFrame([record], columns=sweep_columns(spec.dims.p))


def build_sweep_spec(config: SweepConfig) -> SweepSpec:
    """SweepSpec from a preset (optionally re-gridded) or from custom flags."""
    grid = parse_grid(config.grid) if config.grid is not None else None
    if config.figure is not None:
        preset = resize_preset(FIGURE_PRESETS[config.figure], grid)
        spec = preset.sweep(config.reps, config.seed)
        if config.estimators:
            spec = SweepSpec(spec.dims, config.estimators, spec.axis, spec.fixed, spec.grid,
                             spec.reps, spec.seed, spec.name)
        return spec
    return SweepSpec(ProblemDims(config.n, config.p), config.estimators, config.axis,
                     config.sigma, grid, config.reps, config.seed)


def cmd_sweep(config: SweepConfig) -> int:
    """Run a figure preset or custom sweep and write one row per (point, estimator)."""
    spec = build_sweep_spec(config)
    table = run_sweep(spec, config.threads)
    frame = sweep_to_frame(table)
    for _, row in summarize_sweep(frame).iterrows():
        logger.info("%s: Frobenius %.4f..%.4f (max SE %.4f, %d rejects)", row['Estimator'],
                    row['Min Frobenius'], row['Max Frobenius'], row['Max SE'], row['Rejects'])
    for _, row in summarize_domination(frame, spec.dims.n).iterrows():
        logger.info("%s: largest risk eigenvalue %.4f vs n=%d, dominates MLE: %s", row['Estimator'],
                    row['Max Largest Eigenvalue'], spec.dims.n, row['Dominates MLE'])
    for _, row in check_positive_part(frame).iterrows():
        log = logger.info if row['Holds'] else logger.warning
        log("%s <= %s at all %d points: %s (max difference %.4f)", row['Positive Part'], row['Raw'],
            row['Points'], row['Holds'], row['Max Difference'])
    _emit(frame, config)
    return 0


def cmd_appendix(config: AppendixConfig) -> int:
    """Largest risk eigenvalue of Stein's estimator over a range of n."""
    rows = appendix_sweep(config.columns(), config.n_values(), config.sigma, config.reps,
                          config.seed, config.threads)
    _emit(appendix_to_frame(rows), config)
    return 0


COMMANDS = {
    'verify': cmd_verify,
    'risk': cmd_risk,
    'sweep': cmd_sweep,
    'appendix': cmd_appendix,
}
