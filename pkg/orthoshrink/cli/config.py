"""Validated configuration for each CLI command"""
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..montecarlo import APPENDIX_PRESETS, APPENDIX_SIGMA, DEFAULT_REPS, FIGURE_PRESETS
from ..spectral import ProblemDims
from ..utils.helpers import parse_dims, parse_grid, parse_int_range

DEFAULT_VERIFY_DIMS = ('10x3', '8x5')
DEFAULT_TRIALS = 100


class ExperimentConfig(BaseModel):
    """Fields shared by every command."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    out: Optional[Path] = None
    format: Literal['csv', 'json', 'xlsx'] = 'csv'
    seed: int = Field(42, ge=0)
    reps: int = Field(DEFAULT_REPS, ge=2)
    threads: Optional[int] = Field(None, ge=1)

    @model_validator(mode='after')
    def _xlsx_needs_a_file(self):
        if self.format == 'xlsx' and self.out is None:
            raise ValueError("--format xlsx needs --out")
        return self


class VerifyConfig(ExperimentConfig):
    dims: tuple[str, ...] = DEFAULT_VERIFY_DIMS
    trials: int = Field(DEFAULT_TRIALS, ge=1)

    @field_validator('dims')
    @classmethod
    def _dims_parse(cls, value):
        for text in value:
            parse_dims(text)
        return tuple(value)

    def problem_dims(self) -> list:
        return [parse_dims(text) for text in self.dims]


class RiskConfig(ExperimentConfig):
    n: int = Field(ge=1)
    p: int = Field(ge=1)
    sigma: tuple[float, ...]
    estimator: str = 'stein'

    @model_validator(mode='after')
    def _sigma_matches_p(self):
        ProblemDims(self.n, self.p)
        if len(self.sigma) != self.p:
            raise ValueError(f"--sigma has {len(self.sigma)} values but p={self.p}")
        if any(s < 0 for s in self.sigma):
            raise ValueError("--sigma values must be nonnegative")
        return self

    @property
    def dims(self) -> ProblemDims:
        return ProblemDims(self.n, self.p)


class SweepConfig(ExperimentConfig):
    """Either a figure preset or a full custom sweep."""

    figure: Optional[str] = None
    n: Optional[int] = Field(None, ge=1)
    p: Optional[int] = Field(None, ge=1)
    sigma: Optional[tuple[float, ...]] = None
    estimators: tuple[str, ...] = ()
    axis: int = Field(1, ge=1)
    grid: Optional[str] = None

    @model_validator(mode='after')
    def _preset_or_custom(self):
        if self.grid is not None:
            parse_grid(self.grid)
        if self.figure is not None:
            if self.figure not in FIGURE_PRESETS:
                raise ValueError(f"unknown figure '{self.figure}'; choose from {', '.join(FIGURE_PRESETS)}")
            return self
        missing = [name for name in ('n', 'p', 'sigma', 'grid') if getattr(self, name) is None]
        if missing or not self.estimators:
            missing += [] if self.estimators else ['estimator']
            raise ValueError(f"custom sweeps need {', '.join('--' + name for name in missing)}")
        ProblemDims(self.n, self.p)
        if len(self.sigma) != self.p:
            raise ValueError(f"--sigma has {len(self.sigma)} values but p={self.p}")
        return self


class AppendixConfig(ExperimentConfig):
    figure: Optional[str] = None
    p: Optional[int] = Field(None, ge=1)
    n_range: Optional[str] = None
    sigma: float = Field(APPENDIX_SIGMA, ge=0)

    @model_validator(mode='after')
    def _preset_or_range(self):
        if self.figure is not None:
            if self.figure not in APPENDIX_PRESETS:
                raise ValueError(f"unknown appendix preset '{self.figure}'; choose from {', '.join(APPENDIX_PRESETS)}")
            return self
        if self.p is None or self.n_range is None:
            raise ValueError("appendix needs --p and --n (e.g. --p 3 --n 5..10)")
        parse_int_range(self.n_range)
        return self

    def n_values(self) -> list:
        if self.figure is not None:
            return list(APPENDIX_PRESETS[self.figure].n_values)
        return parse_int_range(self.n_range)

    def columns(self) -> int:
        return APPENDIX_PRESETS[self.figure].p if self.figure is not None else self.p
