"""Analytics over sweep tables: estimator comparisons and domination checks"""
import numpy as np
import pandas as pd


def _curve(df, label, quantity):
    se_column = 'frobenius_se' if quantity == 'frobenius' else quantity.replace('eig', 'eig_se')
    curve = df[df['estimator'] == label][['sweep_value', quantity, se_column]]
    if curve.empty:
        raise KeyError(f"no rows for estimator '{label}'")
    return curve.rename(columns={quantity: 'value', se_column: 'se'}).set_index('sweep_value')


def compare_estimators(df, better, worse, quantity='frobenius', n_se=4.0):
    """
    Compare two estimators' curves point by point.
    The streams of different estimators are independent, so standard
    errors combine in quadrature.

    Returns a DataFrame indexed by sweep value with the difference
    (better − worse), its combined SE, and whether better ≤ worse holds
    within n_se standard errors.
    """
    left = _curve(df, better, quantity)
    right = _curve(df, worse, quantity)
    joined = left.join(right, lsuffix='_better', rsuffix='_worse', how='inner')

    comparison = pd.DataFrame({
        'Better': joined['value_better'],
        'Worse': joined['value_worse'],
        'Difference': joined['value_better'] - joined['value_worse'],
        'Combined SE': np.sqrt(joined['se_better'] ** 2 + joined['se_worse'] ** 2)
    })
    comparison['Holds'] = comparison['Difference'] <= n_se * comparison['Combined SE']
    comparison.index.name = 'Sweep Value'
    return comparison


def raw_counterpart(label):
    """Label of the estimator a positive-part label truncates, or None."""
    if label.startswith('custom+:'):
        return 'custom:' + label[len('custom+:'):]
    if label.endswith('+'):
        return label[:-1]
    return None


def check_positive_part(df, quantity='frobenius', n_se=4.0):
    """
    For every positive-part estimator whose raw counterpart is also in the
    table, check that truncation never raises risk.

    Returns one row per pair with the number of shared grid points, the
    largest difference (positive part − raw) and whether it holds everywhere.
    """
    labels = list(dict.fromkeys(df['estimator']))
    rows = []
    for label in labels:
        raw = raw_counterpart(label)
        if raw is None or raw not in labels:
            continue
        comparison = compare_estimators(df, label, raw, quantity, n_se)
        rows.append((label, raw, len(comparison), comparison['Difference'].max(), bool(comparison['Holds'].all())))
    return pd.DataFrame(rows, columns=['Positive Part', 'Raw', 'Points', 'Max Difference', 'Holds'])


def summarize_domination(df, n, n_se=4.0):
    """
    Per estimator, check that the largest risk eigenvalue stays below n
    (the MLE's risk eigenvalue) at every sweep point.
    """
    checked = df[['estimator', 'sweep_value', 'eig1', 'eig_se1']].copy()
    checked['margin'] = checked['eig1'] - n
    checked['ok'] = checked['eig1'] < n + n_se * checked['eig_se1']

    summary = checked.groupby('estimator', sort=False).agg({
        'sweep_value': 'count',
        'eig1': 'max',
        'margin': 'max',
        'ok': 'all'
    }).reset_index()

    summary.columns = ['Estimator', 'Points', 'Max Largest Eigenvalue', 'Max Margin', 'Dominates MLE']
    summary['Max Margin'] = summary['Max Margin'].round(4)
    return summary


def summarize_sweep(df):
    """Frobenius risk range per estimator, for log summaries."""
    summary = df.groupby('estimator', sort=False).agg({
        'frobenius': ['min', 'max'],
        'frobenius_se': 'max',
        'rejects': 'sum'
    }).reset_index()
    summary.columns = ['Estimator', 'Min Frobenius', 'Max Frobenius', 'Max SE', 'Rejects']
    return summary


__all__ = [
    'check_positive_part',
    'compare_estimators',
    'raw_counterpart',
    'summarize_domination',
    'summarize_sweep'
]
