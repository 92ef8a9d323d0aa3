"""Input validation helpers shared by the solver modules and estimators."""

import numbers

import numpy as np

from .exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidMatrix,
    ValidationError,
)

SIMPLEX_TOL = 1e-9


def _as_float_vector(x, name):
    try:
        arr = np.asarray(x, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name}: not a numeric vector ({exc})") from None
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name}: expected a 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: entries must be finite")
    return arr


def _freeze(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def check_coverage(x, n=None, name="defence", tol=SIMPLEX_TOL):
    """Validate a vector of per-target probabilities without requiring ``sum == 1``.

    Used where unnormalized protection vectors must still be evaluable, e.g.
    when auditing a candidate strategy that violates the simplex constraint.
    """
    arr = _as_float_vector(x, name)
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatch(f"{name}: expected {n} entries, got {arr.shape[0]}")
    if np.any(arr < -tol) or np.any(arr > 1 + tol):
        raise ValidationError(f"{name}: entries must lie in [0, 1]")
    return _freeze(np.clip(arr, 0.0, 1.0))


def check_strategy(x, n=None, name="strategy", tol=SIMPLEX_TOL):
    """Validate a point on the probability simplex.

    Entries must lie in [0, 1] and sum to 1, each within ``tol``. Inputs that
    pass are clipped and renormalized; anything further off is rejected rather
    than silently rescaled.
    """
    arr = check_coverage(x, n=n, name=name, tol=tol)
    total = arr.sum()
    if abs(total - 1.0) > tol:
        raise ValidationError(
            f"{name}: entries must sum to 1 (simplex constraint), got {total:.9g}"
        )
    return _freeze(arr / total)


def check_index(i, n, name="index"):
    if isinstance(i, bool) or not isinstance(i, numbers.Integral):
        raise IndexOutOfRange(f"{name}: expected an integer, got {i!r}")
    if not 0 <= i < n:
        raise IndexOutOfRange(f"{name}: {i} outside [0, {n})")
    return int(i)


def check_assignment(matrix, tol=SIMPLEX_TOL):
    """Validate an n x m column-stochastic assignment matrix."""
    try:
        arr = np.asarray(matrix, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"assignment matrix: not numeric ({exc})") from None
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidMatrix(f"assignment matrix: expected 2-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix("assignment matrix: entries must be finite")
    if np.any(arr < -tol) or np.any(arr > 1 + tol):
        raise InvalidMatrix("assignment matrix: entries must lie in [0, 1]")
    col = arr.sum(axis=0)
    bad = np.flatnonzero(np.abs(col - 1.0) > tol)
    if bad.size:
        raise InvalidMatrix(
            f"assignment matrix: column {bad[0] + 1} sums to {col[bad[0]]:.9g}, expected 1"
        )
    return _freeze(np.clip(arr, 0.0, 1.0))
