"""Scikit-learn style estimators wrapping the teaching loop.

``TeachingClassifier`` and ``TeachingRegressor`` fit a linear model by
first batch-training the target optimum on the supplied data, then
letting the configured teacher feed examples to an SGD student.  They
follow the usual estimator contract (``fit`` / ``predict`` /
``get_params``) so they compose with pipelines and model selection.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, RegressorMixin

from .exceptions import ConfigError, LabelDomainError
from .harness import teach
from .learner import stationarity_gap, train_batch
from .losses import LossKind, RegularizedLoss
from .rng import derive_rng
from .teachers import (
    BatchTeacher,
    CombinationTeacher,
    OmniscientPoolTeacher,
    Pool,
    RandomPoolTeacher,
    RescalablePoolTeacher,
    StudentQuery,
    SurrogateTeacher,
    SynthesisTeacher,
)
from .validation import as_matrix, augment_bias

_TEACHERS = ("omniscient", "random", "surrogate", "batch")
_STRATEGIES = ("pool", "synthesis", "combination", "rescalable_pool")


class _TeachingBase(BaseEstimator):
    def __init__(
        self,
        loss="logistic",
        lam=5e-5,
        eta=1e-4,
        iterations=1000,
        teacher="omniscient",
        strategy="pool",
        radius=None,
        grid_size=64,
        epsilon=1e-12,
        random_state=0,
    ):
        self.loss = loss
        self.lam = lam
        self.eta = eta
        self.iterations = iterations
        self.teacher = teacher
        self.strategy = strategy
        self.radius = radius
        self.grid_size = grid_size
        self.epsilon = epsilon
        self.random_state = random_state

    def _loss_kind(self) -> LossKind:
        kind = LossKind.from_string(self.loss)
        allowed = self._allowed_losses
        if kind not in allowed:
            raise LabelDomainError(
                f"{type(self).__name__} supports losses "
                f"{[k.value for k in allowed]}, got {kind.value!r}"
            )
        return kind

    def _build_teacher(self, pool: Pool, w_star: np.ndarray, kind: LossKind, holder: dict):
        if self.teacher == "random":
            return RandomPoolTeacher(pool, derive_rng(self.random_state, "teacher"))
        if self.teacher == "batch":
            return BatchTeacher()
        if self.teacher == "surrogate":
            return SurrogateTeacher(
                pool, w_star, kind, StudentQuery(lambda: holder["state"])
            )
        if self.teacher != "omniscient":
            raise ConfigError(f"teacher must be one of {_TEACHERS}, got {self.teacher!r}")
        if self.strategy == "pool":
            return OmniscientPoolTeacher(pool)
        if self.strategy == "synthesis":
            return SynthesisTeacher(pool.R, kind)
        if self.strategy == "combination":
            return CombinationTeacher(pool)
        if self.strategy == "rescalable_pool":
            return RescalablePoolTeacher(pool, self.grid_size)
        raise ConfigError(f"strategy must be one of {_STRATEGIES}, got {self.strategy!r}")

    def _fit_core(self, X, y_signed):
        kind = self._loss_kind()
        loss = RegularizedLoss(kind, self.lam)
        Xs = augment_bias(X)
        w_star = train_batch(Xs, y_signed, loss)
        w0 = 0.1 * derive_rng(self.random_state, "init").standard_normal(Xs.shape[1])
        # radius bounds the raw-feature ball; bias augmentation adds one.
        pool_R = None if self.radius is None else float(np.sqrt(self.radius**2 + 1.0))
        pool = Pool.from_arrays(Xs, y_signed, R=pool_R)
        holder: dict = {}
        teacher = self._build_teacher(pool, w_star, kind, holder)
        rows, weights, state = teach(
            teacher,
            w0,
            w_star,
            loss,
            self.eta,
            self.iterations,
            self.epsilon,
            Xs,
            y_signed,
            state_holder=holder,
        )
        self.coef_ = state.w[:-1].copy()
        self.intercept_ = float(state.w[-1])
        self.target_coef_ = w_star[:-1].copy()
        self.target_intercept_ = float(w_star[-1])
        self.target_gradient_norm_ = stationarity_gap(Xs, y_signed, loss, w_star)
        self.n_iter_ = rows[-1].t
        self.distance_to_target_ = rows[-1].dist_to_wstar
        self.trace_ = rows
        return self

    def decision_function(self, X):
        if not hasattr(self, "coef_"):
            raise ConfigError("estimator is not fitted; call fit first")
        X = as_matrix(X, "X")
        return X @ self.coef_ + self.intercept_


class TeachingClassifier(ClassifierMixin, _TeachingBase):
    """Binary linear classifier trained by a teaching policy.

    Labels may be any two values; they are mapped onto {-1, +1} in
    sorted order and mapped back by ``predict``.
    """

    _allowed_losses = (LossKind.LOGISTIC, LossKind.HINGE)

    def fit(self, X, y):
        X = as_matrix(X, "X")
        y = np.asarray(y)
        classes = np.unique(y)
        if classes.shape[0] != 2:
            raise LabelDomainError(
                f"binary classification needs exactly 2 classes, got {classes.shape[0]}"
            )
        self.classes_ = classes
        y_signed = np.where(y == classes[1], 1.0, -1.0)
        return self._fit_core(X, y_signed)

    def predict(self, X):
        scores = self.decision_function(X)
        return np.where(scores >= 0.0, self.classes_[1], self.classes_[0])


class TeachingRegressor(RegressorMixin, _TeachingBase):
    """Linear regressor trained by a teaching policy."""

    _allowed_losses = (LossKind.SQUARE, LossKind.ABSOLUTE)

    def __init__(
        self,
        loss="square",
        lam=0.0,
        eta=1e-4,
        iterations=1000,
        teacher="omniscient",
        strategy="pool",
        radius=None,
        grid_size=64,
        epsilon=1e-12,
        random_state=0,
    ):
        super().__init__(
            loss=loss,
            lam=lam,
            eta=eta,
            iterations=iterations,
            teacher=teacher,
            strategy=strategy,
            radius=radius,
            grid_size=grid_size,
            epsilon=epsilon,
            random_state=random_state,
        )

    def fit(self, X, y):
        X = as_matrix(X, "X")
        y = np.asarray(y, dtype=np.float64)
        return self._fit_core(X, y)

    def predict(self, X):
        return self.decision_function(X)
