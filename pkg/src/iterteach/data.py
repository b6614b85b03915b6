"""Synthetic dataset generators, feature maps and CSV ingestion.

Generators emit raw features only; the constant-1 bias coordinate is
appended later in the learner pipeline, so orthogonal feature maps act
on raw features and never touch the bias.  Every generator is a pure
function of its parameters and seed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .exceptions import DataFormatError, DimensionError
from .linalg import random_orthogonal
from .rng import make_rng
from .validation import as_matrix, as_vector, check_binary_labels


@dataclass
class Dataset:
    """Feature rows, labels, and provenance metadata."""

    X: np.ndarray
    y: np.ndarray
    meta: dict

    def __post_init__(self):
        self.X = as_matrix(self.X, "X")
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.y.shape != (self.X.shape[0],):
            raise DimensionError(
                f"labels shape {self.y.shape} does not match {self.X.shape[0]} rows"
            )

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def dimension(self) -> int:
        return self.X.shape[1]


def _as_rng(rng) -> tuple[np.random.Generator, int | None]:
    if isinstance(rng, np.random.Generator):
        return rng, None
    seed = int(rng)
    return make_rng(seed), seed


def gen_gaussian(
    d: int = 10,
    n_per_class: int = 1000,
    mean_magnitude: float = 0.5,
    rng=0,
) -> Dataset:
    """Two unit-covariance Gaussian classes with means +/- m along 1.

    Class +1 is N(+m 1, I), class -1 is N(-m 1, I); rows are stacked
    +1 block first.  ``rng`` may be an integer seed or a Generator.
    """
    if d < 1 or n_per_class < 1:
        raise ValueError("need d >= 1 and n_per_class >= 1")
    gen, seed = _as_rng(rng)
    mean = mean_magnitude * np.ones(d)
    X = np.vstack(
        [
            mean + gen.standard_normal((n_per_class, d)),
            -mean + gen.standard_normal((n_per_class, d)),
        ]
    )
    y = np.concatenate([np.ones(n_per_class), -np.ones(n_per_class)])
    meta = {
        "source": "gaussian",
        "dimension": d,
        "n": 2 * n_per_class,
        "seed": seed,
        "mean_magnitude": mean_magnitude,
    }
    return Dataset(X, y, meta)


def gen_spherical(n: int, rng=0) -> Dataset:
    """2-D points uniform on the unit circle, labelled by half-circle.

    Angles in (0, pi] get +1, angles in (pi, 2 pi] get -1.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    gen, seed = _as_rng(rng)
    theta = gen.uniform(0.0, 2.0 * np.pi, size=n)
    X = np.column_stack([np.cos(theta), np.sin(theta)])
    y = np.where((theta > 0.0) & (theta <= np.pi), 1.0, -1.0)
    meta = {"source": "spherical", "dimension": 2, "n": n, "seed": seed}
    return Dataset(X, y, meta)


def sample_ball(n: int, d: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """``n`` points uniform in the d-dimensional ball of given radius."""
    direction = rng.standard_normal((n, d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    r = radius * rng.uniform(size=n) ** (1.0 / d)
    return direction * r[:, None]


def gen_ball(
    n: int,
    d: int,
    radius: float = 1.0,
    rng=0,
    w_true: np.ndarray | None = None,
) -> Dataset:
    """Uniform points in a ball with clean linear regression labels.

    ``y = <w_true, x>`` (plus the true bias drawn with ``w_true`` when
    it is not supplied), so the generating model is exactly stationary
    for the square and absolute losses.  The drawn model is recorded in
    ``meta["w_true"]`` including the bias coefficient.
    """
    if n < 1 or d < 1 or radius <= 0:
        raise ValueError("need n >= 1, d >= 1 and radius > 0")
    gen, seed = _as_rng(rng)
    if w_true is None:
        w_true = gen.standard_normal(d + 1)
    else:
        w_true = as_vector(w_true, "w_true")
        if w_true.shape[0] not in (d, d + 1):
            raise DimensionError(f"w_true must have dimension {d} or {d + 1}")
        if w_true.shape[0] == d:
            w_true = np.concatenate([w_true, [0.0]])
    X = sample_ball(n, d, radius, gen)
    y = X @ w_true[:d] + w_true[d]
    meta = {
        "source": "ball",
        "dimension": d,
        "n": n,
        "seed": seed,
        "radius": radius,
        "w_true": w_true.tolist(),
    }
    return Dataset(X, y, meta)


@dataclass(frozen=True)
class FeatureMap:
    """An orthogonal map from the student's raw features to the teacher's."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, "feature map")
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"feature map must be square, got {m.shape}")
        err = np.abs(m.T @ m - np.eye(m.shape[0])).max()
        if err > 1e-10:
            raise ValueError(f"feature map is not orthogonal (max error {err:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def random_feature_map(d: int, rng) -> FeatureMap:
    gen, _ = _as_rng(rng)
    return FeatureMap(random_orthogonal(d, gen))


def apply_map(fmap: FeatureMap, dataset: Dataset) -> Dataset:
    """Map every example through the orthogonal matrix; labels unchanged."""
    if dataset.dimension != fmap.dimension:
        raise DimensionError(
            f"feature map dimension {fmap.dimension} does not match data "
            f"dimension {dataset.dimension}"
        )
    meta = dict(dataset.meta)
    meta["mapped"] = True
    return Dataset(dataset.X @ fmap.matrix.T, dataset.y.copy(), meta)


def load_features(path, label_domain: str = "real") -> Dataset:
    """Load a feature matrix from CSV: one header line, rows f1..fd,label.

    Floats are parsed locale-independently (only '.' decimal points);
    rows with the wrong column count or unparseable cells raise a
    DataFormatError naming the line.  ``label_domain="binary"``
    additionally requires labels in {-1, +1}.
    """
    rows: list[list[float]] = []
    width: int | None = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: missing header line") from None
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if width is None:
                width = len(record)
                if width < 2:
                    raise DataFormatError(
                        f"{path}:{lineno}: need at least one feature and a label"
                    )
            elif len(record) != width:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {width} columns, got {len(record)}"
                )
            try:
                rows.append([float(cell) for cell in record])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise DataFormatError(f"{path}: no data rows (header-only file)")
    arr = np.asarray(rows, dtype=np.float64)
    X, y = arr[:, :-1], arr[:, -1]
    if label_domain == "binary":
        y = check_binary_labels(y, name=f"{path} labels")
    elif label_domain != "real":
        raise ValueError(f"unknown label_domain {label_domain!r}")
    meta = {"source": str(path), "dimension": X.shape[1], "n": X.shape[0], "seed": None}
    return Dataset(X, y, meta)


def save_features(dataset: Dataset, path) -> None:
    """Write a dataset in the CSV format ``load_features`` reads."""
    d = dataset.dimension
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"f{i + 1}" for i in range(d)] + ["label"])
        for i in range(dataset.n):
            writer.writerow(
                [repr(float(v)) for v in dataset.X[i]] + [repr(float(dataset.y[i]))]
            )
