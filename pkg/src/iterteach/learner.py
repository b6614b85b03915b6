"""The SGD student and batch training of its target optimum.

The student is a linear model ``z = <w, x>`` updated one example at a
time: ``w <- w - eta * (intensity(z, y) * x + lam * w)``.  Teachers that
are not allowed to read ``w`` interact with the student only through
``predict``, which serves the inner product and counts the query.

``train_batch`` produces the target ``w*`` as a stationary point of the
full-batch objective ``mean loss + lam/2 ||w||^2``.  Ridge (square loss
with lam > 0) is solved in closed form; smooth losses run a quasi-Newton
warm start followed by gradient-descent polishing; nonsmooth losses may
stop short of the tolerance, in which case a ConvergenceWarning is
issued and the best iterate is returned.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .exceptions import NumericOverflowError
from .losses import LossKind, RegularizedLoss, gradient, intensity_many, value_many
from .validation import as_matrix, as_vector, check_same_dimension


class ConvergenceWarning(UserWarning):
    """Batch training stopped before reaching the gradient tolerance."""


@dataclass
class LearnerState:
    """Weights, learning rate and counters of one student."""

    w: np.ndarray
    eta: float
    loss: RegularizedLoss
    t: int = 0
    query_count: int = 0

    def __post_init__(self):
        self.w = as_vector(self.w, "w")
        if self.eta <= 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")


@dataclass(frozen=True)
class TeachingGoal:
    """The target optimum and the accuracy at which teaching stops."""

    w_star: np.ndarray
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, "w_star", as_vector(self.w_star, "w_star"))
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")


def predict(state: LearnerState, x) -> float:
    """Student output ``<w, x>``; counts one served query."""
    x = as_vector(x, "x")
    check_same_dimension(state.w, x, "w and x")
    state.query_count += 1
    return float(state.w @ x)


def sgd_step(state: LearnerState, x, y: float, eta: float | None = None) -> LearnerState:
    """One stochastic gradient step on example ``(x, y)``.

    Returns a new state; ``eta`` overrides the state's fixed learning
    rate for this step only (schedule hook, unused by default).
    """
    x = as_vector(x, "x")
    check_same_dimension(state.w, x, "w and x")
    step = state.eta if eta is None else float(eta)
    w_next = state.w - step * gradient(state.loss, state.w, x, y)
    if not np.all(np.isfinite(w_next)):
        raise NumericOverflowError(f"non-finite weights after sgd step {state.t + 1}")
    return replace(state, w=w_next, t=state.t + 1)


def batch_objective(X, y, loss: RegularizedLoss, w) -> float:
    """Mean loss over the dataset plus ``lam/2 ||w||^2``."""
    X = as_matrix(X, "X")
    w = as_vector(w, "w")
    z = X @ w
    obj = float(np.mean(value_many(loss.kind, z, y)))
    if loss.lam:
        obj += 0.5 * loss.lam * float(w @ w)
    return obj


def batch_gradient(X, y, loss: RegularizedLoss, w) -> np.ndarray:
    """Gradient of ``batch_objective`` at ``w``."""
    X = as_matrix(X, "X")
    w = as_vector(w, "w")
    beta = intensity_many(loss.kind, X @ w, y)
    g = X.T @ beta / X.shape[0]
    if loss.lam:
        g = g + loss.lam * w
    return g


def stationarity_gap(X, y, loss: RegularizedLoss, w) -> float:
    """Norm of the batch gradient at ``w`` (0 at a smooth optimum)."""
    return float(np.linalg.norm(batch_gradient(X, y, loss, w)))


def _ridge_closed_form(X: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    # Stationarity of mean (z - y)^2 + lam/2 ||w||^2:
    #   (2/n) X^T (X w - y) + lam w = 0.
    n, d = X.shape
    A = 2.0 * (X.T @ X) / n + lam * np.eye(d)
    b = 2.0 * (X.T @ y) / n
    w = np.linalg.solve(A, b)
    # One step of iterative refinement pushes the residual to float noise.
    w -= np.linalg.solve(A, A @ w - b)
    return w


def _batch_gradient_raw(X, y, loss, w):
    beta = intensity_many(loss.kind, X @ w, y)
    g = X.T @ beta / X.shape[0]
    if loss.lam:
        g = g + loss.lam * w
    return g


def _smoothness_bound(X: np.ndarray, loss: RegularizedLoss) -> float:
    # Upper bound on the batch objective's curvature: the loss's second
    # derivative in z is <= 2 (square) or <= 1/4 (logistic).
    curv = 2.0 if loss.kind is LossKind.SQUARE else 0.25
    lam_max = float(np.linalg.eigvalsh(X.T @ X / X.shape[0])[-1])
    return curv * lam_max + loss.lam


def _fixed_step_polish(X, y, loss, w, tol, max_iters=30_000):
    """Descend at step 1/L until the gradient norm hits tol or stalls.

    No objective evaluations, so progress continues down to the float
    noise floor of the gradient itself.
    """
    step = 1.0 / _smoothness_bound(X, loss)
    best_w, best_gn = w.copy(), np.inf
    stall = 0
    for _ in range(max_iters):
        g = _batch_gradient_raw(X, y, loss, w)
        gn = float(np.linalg.norm(g))
        if gn < best_gn * 0.999:
            best_w, best_gn, stall = w.copy(), gn, 0
        else:
            stall += 1
            if stall > 200:
                break
        if gn < tol:
            return w, True
        w = w - step * g
    return best_w, best_gn < tol


def _gd_descend(X, y, loss, w, max_iters, tol, lr=None):
    """Plain full-batch gradient descent; backtracking when lr is None."""
    w = w.copy()
    obj = batch_objective(X, y, loss, w)
    step = 1.0
    for _ in range(max_iters):
        g = batch_gradient(X, y, loss, w)
        gn = float(np.linalg.norm(g))
        if gn < tol:
            return w, True
        if lr is not None:
            w = w - lr * g
            continue
        step = min(step * 2.0, 1e6)
        accepted = False
        while step > 1e-18:
            w_try = w - step * g
            obj_try = batch_objective(X, y, loss, w_try)
            if obj_try <= obj - 1e-4 * step * gn * gn:
                w, obj = w_try, obj_try
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # No acceptable step at float resolution: stationary enough.
            return w, gn < tol
    return w, stationarity_gap(X, y, loss, w) < tol


def train_batch(
    X,
    y,
    loss: RegularizedLoss,
    lr: float | None = None,
    max_iters: int = 1_000_000,
    tol: float = 1e-10,
    method: str = "auto",
) -> np.ndarray:
    """Train to a stationary point of the batch objective.

    ``method="auto"`` picks the closed-form ridge solve for the square
    loss and a quasi-Newton start plus gradient polishing otherwise;
    ``method="gd"`` forces the plain gradient-descent path (fixed step
    ``lr`` if given, backtracking otherwise).  A ConvergenceWarning is
    issued if the returned iterate's gradient norm is still >= tol.
    """
    X = as_matrix(X, "X")
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] == 0:
        raise ValueError("dataset must be non-empty")
    n, d = X.shape
    w0 = np.zeros(d)

    if method == "auto" and loss.kind is LossKind.SQUARE:
        if loss.lam > 0:
            w = _ridge_closed_form(X, y, loss.lam)
        else:
            w, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    elif method == "auto":
        res = minimize(
            lambda w: batch_objective(X, y, loss, w),
            w0,
            jac=lambda w: batch_gradient(X, y, loss, w),
            method="L-BFGS-B",
            options={"maxiter": 20_000, "gtol": tol * 0.1, "ftol": 1e-16},
        )
        if loss.kind is LossKind.LOGISTIC:
            w, _ = _fixed_step_polish(X, y, loss, res.x, tol, min(max_iters, 30_000))
        else:
            # Nonsmooth losses: backtracking polish, may stop above tol.
            w, _ = _gd_descend(X, y, loss, res.x, min(max_iters, 5_000), tol)
    elif method == "gd":
        w, _ = _gd_descend(X, y, loss, w0, max_iters, tol, lr=lr)
    else:
        raise ValueError(f"unknown method {method!r}")

    gap = stationarity_gap(X, y, loss, w)
    if gap >= tol:
        warnings.warn(
            f"batch training stopped at gradient norm {gap:.3e} (tol {tol:.1e})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return w
