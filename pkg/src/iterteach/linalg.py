"""Minimal dense linear algebra used by every other module.

Vectors and matrices are plain float64 numpy arrays; the helpers here
add the dimension checks and determinism conventions the rest of the
package relies on.  Everything is dense and unblocked: dimensions in
this package stay in the hundreds.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionError
from .validation import as_matrix, as_vector, check_same_dimension


def dot(a, b) -> float:
    """Inner product of two equal-dimension vectors."""
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    check_same_dimension(a, b)
    return float(a @ b)


def norm2(a) -> float:
    """Euclidean norm sqrt(a . a)."""
    a = as_vector(a, "a")
    return float(np.linalg.norm(a))


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random d x d orthogonal matrix, deterministic given the generator.

    Built by QR-orthonormalizing a matrix of standard normal draws, with
    the sign convention that the triangular factor's diagonal is
    positive.  That fixes the matrix uniquely for a given normal-draw
    stream, so identical seeds give identical matrices.
    """
    if d < 1:
        raise DimensionError(f"dimension must be >= 1, got {d}")
    while True:
        m = rng.standard_normal((d, d))
        q, r = np.linalg.qr(m)
        diag = np.diag(r)
        # Degenerate draws (an exactly-zero diagonal entry) have
        # probability zero; re-sample rather than divide by zero.
        if np.all(diag != 0.0):
            return q * np.sign(diag)


def least_squares_min_norm(A, b) -> tuple[np.ndarray, float]:
    """Minimum-norm solution of min ||A @ coeffs - b||.

    Returns ``(coeffs, residual)`` where ``residual`` is the achieved
    minimum value of the objective.  Rank deficiency is handled by the
    minimum-norm convention of the SVD-based solver.
    """
    A = as_matrix(A, "A")
    b = as_vector(b, "b")
    if A.shape[1] < 1:
        raise DimensionError("A must have at least one column")
    if A.shape[0] != b.shape[0]:
        raise DimensionError(
            f"A has {A.shape[0]} rows but b has dimension {b.shape[0]}"
        )
    coeffs, _, _, _ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.linalg.norm(A @ coeffs - b))
    return coeffs, residual
