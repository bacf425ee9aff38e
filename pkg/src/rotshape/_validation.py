"""Small argument checks shared by the estimators and the config loader."""

import math

import numpy as np

from .exceptions import ValidationError


def check_positive(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be finite and > 0, got {value!r}")
    return value


def check_finite(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def check_choice(name, value, choices):
    if value not in choices:
        raise ValidationError(f"{name} must be one of {tuple(choices)}, got {value!r}")
    return value


def check_time_axis(t, min_samples=2):
    """1-D, finite, strictly increasing float array."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 1:
        raise ValidationError("time axis must be one-dimensional")
    if t.size < min_samples:
        raise ValidationError(f"time axis needs at least {min_samples} samples")
    if not np.all(np.isfinite(t)):
        raise ValidationError("time axis contains non-finite values")
    if t.size > 1 and not np.all(np.diff(t) > 0):
        raise ValidationError("time axis must be strictly increasing")
    return t


def check_frequencies(Omega):
    Om = np.asarray(Omega, dtype=float)
    if not np.all(np.isfinite(Om)):
        raise ValidationError("Raman shifts must be finite")
    if np.any(Om < 0):
        raise ValidationError("Raman shifts must be >= 0")
    return Om
