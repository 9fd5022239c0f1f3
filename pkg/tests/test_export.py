import json

import numpy as np
import pandas as pd
import pytest
from openpyxl import load_workbook

from orthoshrink.exceptions import ConfigError
from orthoshrink.export import (
    APPENDIX_COLUMNS,
    FORMAT_VERSION,
    appendix_to_frame,
    estimate_record,
    export_csv,
    export_json,
    read_sweep_csv,
    read_sweep_json,
    records_from_frame,
    sweep_columns,
    sweep_to_frame,
    write_table
)
from orthoshrink.montecarlo import AppendixRow, SweepSpec, run_sweep
from orthoshrink.spectral import ProblemDims


@pytest.fixture(scope='module')
def sweep_frame():
    spec = SweepSpec(ProblemDims(10, 3), ('em', 'stein'), 1, (0, 0, 0), (0, 1, 1), reps=40, seed=42)
    return sweep_to_frame(run_sweep(spec, threads=1))


def test_sweep_columns():
    assert sweep_columns(2) == ['sweep_value', 'estimator', 'frobenius', 'frobenius_se',
                                'eig1', 'eig2', 'eig_se1', 'eig_se2', 'reps', 'seed', 'rejects']


def test_sweep_frame_layout(sweep_frame):
    assert list(sweep_frame.columns) == sweep_columns(3)
    assert len(sweep_frame) == 4
    assert sweep_frame['reps'].tolist() == [40] * 4
    assert sweep_frame['seed'].tolist() == [42] * 4


def test_csv_uses_six_significant_digits():
    frame = pd.DataFrame({'value': [1.23456789, 1234567.0], 'label': ['a', 'b']})
    assert export_csv(frame).splitlines() == ['value,label', '1.23457,a', '1.23457e+06,b']


def test_json_keeps_full_precision(sweep_frame, tmp_path):
    path = write_table(sweep_frame, tmp_path / 'sweep.json', 'json', extra={'sigma': np.array([1.0, 2.0])})
    document = json.loads(path.read_text())
    assert document['meta']['format_version'] == FORMAT_VERSION
    assert document['meta']['total_records'] == 4
    assert document['meta']['columns'] == sweep_columns(3)
    assert document['extra']['sigma'] == [1.0, 2.0]
    assert 'timestamp' not in json.dumps(document['meta'])

    restored = read_sweep_json(path)
    assert list(restored.columns) == sweep_columns(3)
    assert restored['frobenius'].tolist() == sweep_frame['frobenius'].tolist()


def test_json_is_reproducible(sweep_frame):
    assert export_json(sweep_frame) == export_json(sweep_frame.copy())


def test_csv_records_parse_back(sweep_frame, tmp_path):
    path = write_table(sweep_frame, tmp_path / 'sweep.csv')
    records = records_from_frame(read_sweep_csv(path))
    assert [record.estimator for record in records] == ['em', 'stein', 'em', 'stein']
    assert len(records[0].eigenvalues) == 3
    assert records[1].frobenius == pytest.approx(sweep_frame['frobenius'].iloc[1], rel=1e-5)


def test_xlsx_export(sweep_frame, tmp_path):
    path = write_table(sweep_frame, tmp_path / 'sweep.xlsx', 'xlsx')
    sheet = load_workbook(path)['risk']
    header = [cell.value for cell in next(sheet.iter_rows(max_row=1))]
    assert header == sweep_columns(3)
    assert sheet.max_row == 5


def test_unknown_format_is_rejected(sweep_frame, tmp_path):
    with pytest.raises(ConfigError):
        write_table(sweep_frame, tmp_path / 'sweep.txt', 'txt')


def test_appendix_frame():
    rows = [AppendixRow(4, 3, 50.0, 3.9, 0.01, 100, 42, 0, False),
            AppendixRow(5, 3, 50.0, 5.2, 0.01, 100, 42, 1, True)]
    frame = appendix_to_frame(rows)
    assert list(frame.columns) == APPENDIX_COLUMNS
    assert frame['below_n'].tolist() == [True, False]
    assert frame['rejects'].tolist() == [0, 1]


def test_estimate_record_seed_override(sweep_frame):
    class Estimate:
        label = 'mle'
        frobenius = 30.0
        frobenius_stderr = 0.1
        eigenvalues = [10.0, 10.0]
        eigenvalue_stderr = [0.05, 0.05]
        reps = 10
        seed = 123
        rejects = 0

    assert estimate_record(2, Estimate())['seed'] == 123
    record = estimate_record(2, Estimate(), seed=7)
    assert record['seed'] == 7
    assert list(record) == sweep_columns(2)
