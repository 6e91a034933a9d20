"""Input validation helpers shared by the statistics modules."""

from __future__ import annotations

import numpy as np

from .domain import IatSeries
from .errors import DataError, InsufficientDataError


def as_float_array(values, name: str = "values") -> np.ndarray:
    """Coerce an ``IatSeries`` or any 1-d sequence to a float array."""
    if isinstance(values, IatSeries):
        values = values.values
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size and not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite entries")
    return arr


def check_positive_sample(values, name: str = "values", min_n: int = 1) -> np.ndarray:
    """Validate a sample of strictly positive observations."""
    arr = as_float_array(values, name)
    if arr.size < min_n:
        raise InsufficientDataError(
            f"{name}: need at least {min_n} observation(s), got {arr.size}"
        )
    if arr.size and arr.min() <= 0.0:
        raise DataError(f"{name} must be strictly positive")
    return arr


def check_rate(rate: float) -> float:
    rate = float(rate)
    if not np.isfinite(rate) or rate <= 0.0:
        raise ValueError(f"rate must be a positive finite number, got {rate!r}")
    return rate


def check_probability(p: float, name: str = "p", *, allow_one: bool = False) -> float:
    p = float(p)
    hi_ok = p <= 1.0 if allow_one else p < 1.0
    if not (0.0 <= p and hi_ok):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise ValueError(f"{name} must be in {bound}, got {p!r}")
    return p


def check_non_negative(x: float, name: str) -> float:
    x = float(x)
    if not np.isfinite(x) or x < 0.0:
        raise ValueError(f"{name} must be non-negative and finite, got {x!r}")
    return x
