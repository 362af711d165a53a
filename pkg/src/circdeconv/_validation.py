"""Input validation helpers."""

from numbers import Integral, Real

import numpy as np

from .exceptions import DataFormatError


def check_circular_values(values, name="sample"):
    """Return ``values`` as a 1-d float array of points in [0, 1).

    Accepts any array-like of shape ``(n,)`` or ``(n, 1)`` (the latter so the
    estimator accepts sklearn-style column inputs).
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise DataFormatError(f"{name}: expected a 1-d array, got shape {arr.shape}")
    if arr.size == 0:
        raise DataFormatError("empty sample")
    if not np.all(np.isfinite(arr)):
        raise DataFormatError(f"{name}: non-finite value")
    bad = (arr < 0.0) | (arr >= 1.0)
    if np.any(bad):
        first = arr[np.argmax(bad)]
        raise DataFormatError(f"value outside [0,1): {first!r}")
    return arr


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_real(value, name, minimum=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ValueError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite")
    if minimum is not None:
        if strict and not value > minimum:
            raise ValueError(f"{name} must be > {minimum}, got {value}")
        if not strict and not value >= minimum:
            raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value
