"""Helper utility functions"""
import os
import re

import numpy as np

from ..exceptions import ConfigError
from ..spectral import ProblemDims

DEFAULT_SEED = 42
MAX_DEFAULT_THREADS = 8

_NUMBER = r'[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?'


def parse_float_list(text: str) -> tuple:
    """
    Parse a comma-separated list of numbers.
    Accepts forms like:
    - 20,0,0
    - 6, 6, 6
    - 1e1,2.5

    Args:
        text (str): Comma-separated numbers

    Returns:
        tuple: Parsed floats

    Raises:
        ConfigError: If any item is not a number
    """
    if text is None or not str(text).strip():
        raise ConfigError("expected a comma-separated list of numbers, got an empty value")

    items = [item.strip() for item in str(text).split(',')]
    for item in items:
        if not re.fullmatch(_NUMBER, item):
            raise ConfigError(f"not a number: '{item}' in '{text}'")
    return tuple(float(item) for item in items)


def parse_dims(text: str) -> ProblemDims:
    """
    Parse problem dimensions written as NxP (e.g. 10x3, 8X5)

    Args:
        text (str): Dimensions string

    Returns:
        ProblemDims: Parsed and validated dimensions
    """
    match = re.fullmatch(r'\s*(\d+)\s*[xX×]\s*(\d+)\s*', str(text))
    if not match:
        raise ConfigError(f"dimensions must look like 10x3, got '{text}'")
    try:
        return ProblemDims(int(match.group(1)), int(match.group(2)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_int_range(text: str) -> list:
    """
    Parse an inclusive integer range '5..10' or a single integer '7'

    Returns:
        list: The integers in the range, ascending

    Raises:
        ConfigError: On malformed or empty ranges
    """
    match = re.fullmatch(r'\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?', str(text))
    if not match:
        raise ConfigError(f"range must look like 5..10, got '{text}'")
    start = int(match.group(1))
    stop = int(match.group(2)) if match.group(2) is not None else start
    values = list(range(start, stop + 1))
    if not values:
        raise ConfigError(f"range '{text}' is empty")
    return values


def parse_grid(text: str) -> tuple:
    """Parse a sweep grid 'start:stop:step' (step defaults to 1)."""
    parts = str(text).split(':')
    if len(parts) not in (2, 3):
        raise ConfigError(f"grid must look like 0:20:1, got '{text}'")
    values = parse_float_list(','.join(parts))
    start, stop = values[0], values[1]
    step = values[2] if len(values) == 3 else 1.0
    return start, stop, step


def format_significant(value, digits: int = 6) -> str:
    """Format a float with a fixed number of significant digits."""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ''
    return f"{value:.{digits}g}"


def relative_error(actual, expected, floor: float = 1.0) -> float:
    """
    Max absolute deviation scaled by max(|expected|, floor)

    Args:
        actual: Computed array
        expected: Reference array
        floor (float): Lower bound on the scale

    Returns:
        float: Relative error
    """
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    scale = max(float(np.max(np.abs(expected))) if expected.size else 0.0, floor)
    return float(np.max(np.abs(actual - expected))) / scale if expected.size else 0.0


def resolve_seed(seed=None) -> int:
    """
    Seed from the argument, else the ORTHOSHRINK_SEED environment variable,
    else the default

    Raises:
        ConfigError: If ORTHOSHRINK_SEED is not an integer
    """
    if seed is not None:
        return int(seed)
    env_seed = os.getenv("ORTHOSHRINK_SEED")
    if env_seed is None or not env_seed.strip():
        return DEFAULT_SEED
    if not re.fullmatch(r'\s*\d+\s*', env_seed):
        raise ConfigError(f"ORTHOSHRINK_SEED must be a non-negative integer, got '{env_seed}'")
    return int(env_seed)


def resolve_threads(threads=None) -> int:
    """Thread count from the argument, else ORTHOSHRINK_THREADS, else min(cpu_count, 8)."""
    if threads is not None:
        return max(int(threads), 1)
    env_threads = os.getenv("ORTHOSHRINK_THREADS")
    if env_threads and env_threads.strip().isdigit():
        return max(int(env_threads), 1)
    return min(os.cpu_count() or 1, MAX_DEFAULT_THREADS)
