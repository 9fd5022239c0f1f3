"""Utility functions module"""
from .helpers import (
    DEFAULT_SEED,
    format_significant,
    parse_dims,
    parse_float_list,
    parse_grid,
    parse_int_range,
    relative_error,
    resolve_seed,
    resolve_threads
)

__all__ = [
    'DEFAULT_SEED',
    'format_significant',
    'parse_dims',
    'parse_float_list',
    'parse_grid',
    'parse_int_range',
    'relative_error',
    'resolve_seed',
    'resolve_threads'
]
