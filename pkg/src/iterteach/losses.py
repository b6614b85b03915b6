"""Loss functions of the linear student.

Four convex losses on the margin/residual ``z = <w, x>``:

* square:    ``(z - y)^2``          (no 1/2 factor; see note below)
* absolute:  ``|z - y|``
* logistic:  ``log(1 + exp(-y z))``
* hinge:     ``max(1 - y z, 0)``

The *intensity* of an example is the scalar derivative of the loss with
respect to ``z``; the parameter gradient is ``intensity * x`` plus the
L2 term ``lam * w`` of the ridge objective ``lam/2 * ||w||^2``.

The square loss deliberately omits the conventional 1/2 factor so that
the closed-form teaching scales and rate bounds used elsewhere in the
package apply verbatim; the halved variant only rescales intensities by
2, which callers can absorb into the learning rate.

Classification losses (logistic, hinge) require labels in {-1, +1};
regression losses accept any real label.

Subgradient conventions at kinks: ``sign(0) = 0`` for the absolute
loss, and the hinge derivative is 0 exactly on the margin, so an
example sitting on its margin produces no update.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import LabelDomainError
from .validation import as_vector, check_binary_label, check_same_dimension


class LossKind(enum.Enum):
    SQUARE = "square"
    ABSOLUTE = "absolute"
    LOGISTIC = "logistic"
    HINGE = "hinge"

    @property
    def is_classification(self) -> bool:
        return self in (LossKind.LOGISTIC, LossKind.HINGE)

    @classmethod
    def from_string(cls, name: str) -> "LossKind":
        try:
            return cls(name.lower())
        except ValueError:
            raise LabelDomainError(
                f"unknown loss kind {name!r}; expected one of "
                f"{[k.value for k in cls]}"
            ) from None


@dataclass(frozen=True)
class RegularizedLoss:
    """A loss kind together with its L2 coefficient."""

    kind: LossKind
    lam: float = 0.0

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")


def _check_label(kind: LossKind, y: float) -> float:
    if kind.is_classification:
        return check_binary_label(y)
    return float(y)


def value(kind: LossKind, z: float, y: float) -> float:
    """Loss value at inner product ``z`` with label ``y``."""
    y = _check_label(kind, y)
    z = float(z)
    if kind is LossKind.SQUARE:
        return (z - y) ** 2
    if kind is LossKind.ABSOLUTE:
        return abs(z - y)
    if kind is LossKind.LOGISTIC:
        # log1p(exp(.)) computed stably on both tails.
        m = -y * z
        if m > 0:
            return m + np.log1p(np.exp(-m))
        return float(np.log1p(np.exp(m)))
    if kind is LossKind.HINGE:
        return max(1.0 - y * z, 0.0)
    raise AssertionError(kind)


def intensity(kind: LossKind, z: float, y: float) -> float:
    """Derivative of the loss with respect to the inner product ``z``.

    The parameter gradient of the bare loss is ``intensity * x``.
    """
    y = _check_label(kind, y)
    z = float(z)
    if kind is LossKind.SQUARE:
        return 2.0 * (z - y)
    if kind is LossKind.ABSOLUTE:
        return float(np.sign(z - y))
    if kind is LossKind.LOGISTIC:
        # -y / (1 + exp(y z)), stable for large |z|.
        m = y * z
        if m > 0:
            e = np.exp(-m)
            return float(-y * e / (1.0 + e))
        return float(-y / (1.0 + np.exp(m)))
    if kind is LossKind.HINGE:
        return -y if 1.0 - y * z > 0.0 else 0.0
    raise AssertionError(kind)


def intensity_many(kind: LossKind, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized ``intensity`` over aligned arrays of z and labels."""
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if kind is LossKind.SQUARE:
        return 2.0 * (z - y)
    if kind is LossKind.ABSOLUTE:
        return np.sign(z - y)
    if kind is LossKind.LOGISTIC:
        m = y * z
        out = np.empty_like(z)
        pos = m > 0
        e = np.exp(-m[pos])
        out[pos] = -y[pos] * e / (1.0 + e)
        out[~pos] = -y[~pos] / (1.0 + np.exp(m[~pos]))
        return out
    if kind is LossKind.HINGE:
        return np.where(1.0 - y * z > 0.0, -y, 0.0)
    raise AssertionError(kind)


def value_many(kind: LossKind, z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized ``value`` over aligned arrays of z and labels."""
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if kind is LossKind.SQUARE:
        return (z - y) ** 2
    if kind is LossKind.ABSOLUTE:
        return np.abs(z - y)
    if kind is LossKind.LOGISTIC:
        m = -y * z
        return np.where(m > 0, m + np.log1p(np.exp(-np.abs(m))), np.log1p(np.exp(m)))
    if kind is LossKind.HINGE:
        return np.maximum(1.0 - y * z, 0.0)
    raise AssertionError(kind)


def gradient(loss: RegularizedLoss, w, x, y: float) -> np.ndarray:
    """Full parameter gradient ``intensity(<w,x>, y) * x + lam * w``."""
    w = as_vector(w, "w")
    x = as_vector(x, "x")
    check_same_dimension(w, x, "w and x")
    beta = intensity(loss.kind, float(w @ x), y)
    g = beta * x
    if loss.lam:
        g = g + loss.lam * w
    return g
