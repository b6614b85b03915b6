"""Input validation helpers.

Light-weight analogues of scikit-learn's ``check_array`` family, raising
the package's own exception types so callers can distinguish shape
problems from label problems.  All helpers return float64 arrays.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionError, LabelDomainError


def as_vector(a, name: str = "vector") -> np.ndarray:
    """Coerce to a finite 1-D float64 array of dimension >= 1."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise DimensionError(f"{name} must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} contains non-finite entries")
    return arr


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float64 array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} contains non-finite entries")
    return arr


def check_same_dimension(a: np.ndarray, b: np.ndarray, what: str = "vectors") -> None:
    if a.shape != b.shape:
        raise DimensionError(f"{what} have mismatched shapes {a.shape} vs {b.shape}")


def check_binary_label(y: float) -> float:
    """Validate a single classification label; must be -1 or +1."""
    if y not in (-1, 1, -1.0, 1.0):
        raise LabelDomainError(f"classification label must be -1 or +1, got {y!r}")
    return float(y)


def check_binary_labels(y, name: str = "labels") -> np.ndarray:
    """Validate an array of classification labels in {-1, +1}."""
    arr = np.asarray(y, dtype=np.float64)
    bad = ~np.isin(arr, (-1.0, 1.0))
    if np.any(bad):
        first = arr[bad].ravel()[0]
        raise LabelDomainError(f"{name} must be in {{-1, +1}}; found {first!r}")
    return arr


def augment_bias(X: np.ndarray) -> np.ndarray:
    """Append a constant-1 coordinate to each row (bias feature)."""
    X = as_matrix(X, "X")
    return np.hstack([X, np.ones((X.shape[0], 1))])
