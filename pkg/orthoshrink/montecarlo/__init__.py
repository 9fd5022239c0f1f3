"""
Monte Carlo module
Deterministic, thread-parallel risk estimation and figure sweeps
"""
from .harness import (
    CHUNK_SIZE,
    MatrixRiskEstimate,
    SureAgreement,
    mc_matrix_risk,
    mc_sure_agreement
)
from .sampling import (
    MeanSpec,
    mean_from_singular_values,
    point_seed,
    sample_observation,
    substream
)
from .sweeps import (
    APPENDIX_PRESETS,
    APPENDIX_SIGMA,
    DEFAULT_REPS,
    FIGURE_PRESETS,
    PRESET_NAMES,
    AppendixPreset,
    AppendixRow,
    FigurePreset,
    SweepRow,
    SweepSpec,
    SweepTable,
    appendix_sweep,
    resize_preset,
    run_sweep,
    sweep_values_array
)

__all__ = [
    'CHUNK_SIZE',
    'MatrixRiskEstimate',
    'SureAgreement',
    'mc_matrix_risk',
    'mc_sure_agreement',
    'MeanSpec',
    'mean_from_singular_values',
    'point_seed',
    'sample_observation',
    'substream',
    'APPENDIX_PRESETS',
    'APPENDIX_SIGMA',
    'DEFAULT_REPS',
    'FIGURE_PRESETS',
    'PRESET_NAMES',
    'AppendixPreset',
    'AppendixRow',
    'FigurePreset',
    'SweepRow',
    'SweepSpec',
    'SweepTable',
    'appendix_sweep',
    'resize_preset',
    'run_sweep',
    'sweep_values_array'
]
