import numpy as np
import pytest

from orthoshrink.exceptions import ConfigError
from orthoshrink.spectral import ProblemDims
from orthoshrink.utils import (
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


def test_parse_float_list():
    assert parse_float_list("20,0,0") == (20.0, 0.0, 0.0)
    assert parse_float_list(" 6, 6 ,6") == (6.0, 6.0, 6.0)
    assert parse_float_list("1e1,2.5,.5") == (10.0, 2.5, 0.5)
    for text in ("", "1,,2", "a,b", None):
        with pytest.raises(ConfigError):
            parse_float_list(text)


def test_parse_dims():
    assert parse_dims("10x3") == ProblemDims(10, 3)
    assert parse_dims(" 8X5 ") == ProblemDims(8, 5)
    with pytest.raises(ConfigError):
        parse_dims("10-3")
    with pytest.raises(ConfigError):
        parse_dims("3x10")


def test_parse_int_range():
    assert parse_int_range("5..10") == [5, 6, 7, 8, 9, 10]
    assert parse_int_range("7") == [7]
    with pytest.raises(ConfigError):
        parse_int_range("10..5")
    with pytest.raises(ConfigError):
        parse_int_range("5-10")


def test_parse_grid():
    assert parse_grid("0:20:1") == (0.0, 20.0, 1.0)
    assert parse_grid("0:5") == (0.0, 5.0, 1.0)
    with pytest.raises(ConfigError):
        parse_grid("0")


def test_format_significant():
    assert format_significant(7.656123456) == "7.65612"
    assert format_significant(float('nan')) == ""
    assert format_significant(None) == ""
    assert format_significant(3.14159, digits=3) == "3.14"


def test_relative_error():
    assert relative_error([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert relative_error([10.5], [10.0]) == pytest.approx(0.05)
    assert relative_error([0.5], [0.0]) == pytest.approx(0.5)
    assert relative_error(np.array([]), np.array([])) == 0.0


def test_resolve_seed(monkeypatch):
    monkeypatch.delenv('ORTHOSHRINK_SEED', raising=False)
    assert resolve_seed() == DEFAULT_SEED
    assert resolve_seed(7) == 7
    monkeypatch.setenv('ORTHOSHRINK_SEED', '123')
    assert resolve_seed() == 123
    monkeypatch.setenv('ORTHOSHRINK_SEED', 'abc')
    with pytest.raises(ConfigError):
        resolve_seed()


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv('ORTHOSHRINK_THREADS', raising=False)
    assert 1 <= resolve_threads() <= 8
    assert resolve_threads(3) == 3
    assert resolve_threads(0) == 1
    monkeypatch.setenv('ORTHOSHRINK_THREADS', '5')
    assert resolve_threads() == 5
