"""Sweep and appendix table export (CSV, JSON, XLSX) and re-import"""
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import ConfigError

FORMAT_VERSION = '1.0'
CSV_FLOAT_FORMAT = '%.6g'
OUTPUT_FORMATS = ('csv', 'json', 'xlsx')


def sweep_columns(p):
    """Bit-exact column order of a sweep table for p eigenvalues."""
    return (['sweep_value', 'estimator', 'frobenius', 'frobenius_se']
            + [f'eig{k}' for k in range(1, p + 1)]
            + [f'eig_se{k}' for k in range(1, p + 1)]
            + ['reps', 'seed', 'rejects'])


APPENDIX_COLUMNS = ['n', 'p', 'sigma', 'largest_eigenvalue', 'eigenvalue_se',
                    'below_n', 'admissible', 'reps', 'seed', 'rejects']


@dataclass(frozen=True)
class SweepRecord:
    """One parsed sweep row."""

    sweep_value: float
    estimator: str
    frobenius: float
    frobenius_se: float
    eigenvalues: tuple
    eigenvalue_se: tuple
    reps: int
    seed: int
    rejects: int


def estimate_record(sweep_value, estimate, seed=None):
    """Flatten a MatrixRiskEstimate into one sweep-table record."""
    record = {
        'sweep_value': float(sweep_value),
        'estimator': str(estimate.label),
        'frobenius': float(estimate.frobenius),
        'frobenius_se': float(estimate.frobenius_stderr),
    }
    for k, value in enumerate(estimate.eigenvalues, start=1):
        record[f'eig{k}'] = float(value)
    for k, value in enumerate(estimate.eigenvalue_stderr, start=1):
        record[f'eig_se{k}'] = float(value)
    record['reps'] = int(estimate.reps)
    record['seed'] = int(estimate.seed if seed is None else seed)
    record['rejects'] = int(estimate.rejects)
    return record


def prepare_sweep_records(table):
    """Records of a SweepTable in row order, seeded with the sweep's master seed."""
    return [estimate_record(row.sweep_value, row.estimate, row.seed) for row in table.rows]


def sweep_to_frame(table):
    """SweepTable → DataFrame with the exact sweep column order."""
    return pd.DataFrame(prepare_sweep_records(table), columns=sweep_columns(table.p))


def appendix_to_frame(rows):
    """List of AppendixRow → DataFrame, one row per n."""
    return pd.DataFrame([{
        'n': row.n,
        'p': row.p,
        'sigma': row.sigma,
        'largest_eigenvalue': row.largest_eigenvalue,
        'eigenvalue_se': row.eigenvalue_stderr,
        'below_n': row.below_n,
        'admissible': row.admissible,
        'reps': row.reps,
        'seed': row.seed,
        'rejects': row.rejects
    } for row in rows], columns=APPENDIX_COLUMNS)


def export_csv(df):
    """CSV text, floats written with 6 significant digits."""
    return df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT)


def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def export_json(df, extra=None):
    """
    JSON document with full-precision floats.
    No timestamp is written so identical runs give identical files.
    """
    data = [{key: _json_value(value) for key, value in record.items()}
            for record in df.to_dict(orient='records')]
    document = {
        'meta': {
            'total_records': len(data),
            'format_version': FORMAT_VERSION,
            'columns': list(df.columns)
        },
        'data': data
    }
    if extra:
        document['extra'] = {key: _json_value(value) for key, value in extra.items()}
    return json.dumps(document, indent=2)


def export_xlsx(df, path):
    """Write an Excel sheet through openpyxl."""
    df.to_excel(path, index=False, engine='openpyxl', sheet_name='risk')


def write_table(df, path, fmt='csv', extra=None):
    """
    Write a table to `path` in the requested format.
    Returns the path written. OSError propagates to the caller.
    """
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got '{fmt}'")
    path = Path(path)
    if fmt == 'xlsx':
        export_xlsx(df, path)
    elif fmt == 'json':
        path.write_text(export_json(df, extra), encoding='utf-8')
    else:
        path.write_text(export_csv(df), encoding='utf-8')
    return path


def read_sweep_csv(path):
    """Read a sweep or appendix CSV back into a DataFrame."""
    return pd.read_csv(path)


def read_sweep_json(path):
    """Read a JSON export back into a DataFrame with its original column order."""
    document = json.loads(Path(path).read_text(encoding='utf-8'))
    return pd.DataFrame(document['data'], columns=document['meta']['columns'])


def records_from_frame(df):
    """Sweep DataFrame → list of SweepRecord."""
    p = sum(1 for column in df.columns if column.startswith('eig') and not column.startswith('eig_se'))
    records = []
    for _, row in df.iterrows():
        records.append(SweepRecord(
            sweep_value=float(row['sweep_value']),
            estimator=str(row['estimator']),
            frobenius=float(row['frobenius']),
            frobenius_se=float(row['frobenius_se']),
            eigenvalues=tuple(float(row[f'eig{k}']) for k in range(1, p + 1)),
            eigenvalue_se=tuple(float(row[f'eig_se{k}']) for k in range(1, p + 1)),
            reps=int(row['reps']),
            seed=int(row['seed']),
            rejects=int(row['rejects'])
        ))
    return records


__all__ = [
    'APPENDIX_COLUMNS',
    'FORMAT_VERSION',
    'OUTPUT_FORMATS',
    'SweepRecord',
    'appendix_to_frame',
    'estimate_record',
    'export_csv',
    'export_json',
    'export_xlsx',
    'prepare_sweep_records',
    'read_sweep_csv',
    'read_sweep_json',
    'records_from_frame',
    'sweep_columns',
    'sweep_to_frame',
    'write_table'
]
