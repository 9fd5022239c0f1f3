"""Spectral decompositions module"""
from .decompositions import (
    DEFAULT_REL_TOL,
    EPS_ABS,
    GapCheck,
    Observation,
    ProblemDims,
    SpectralPair,
    SvdTriple,
    as_observation,
    eigen_gap_check,
    gap_mask,
    gram_spectral,
    pairwise_inverse_gaps,
    thin_svd
)

__all__ = [
    'DEFAULT_REL_TOL',
    'EPS_ABS',
    'GapCheck',
    'Observation',
    'ProblemDims',
    'SpectralPair',
    'SvdTriple',
    'as_observation',
    'eigen_gap_check',
    'gap_mask',
    'gram_spectral',
    'pairwise_inverse_gaps',
    'thin_svd'
]
