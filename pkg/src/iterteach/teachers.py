"""Teaching policies: baselines, omniscient, surrogate and imitation.

Given the student's update ``w' = w - eta * g`` for an example with
full gradient ``g``, the squared distance to the target decomposes as

    ||w' - w*||^2 = ||w - w*||^2 + eta^2 * T1 - 2 * eta * T2,

with the *difficulty* ``T1 = ||g||^2`` and *usefulness*
``T2 = <w - w*, g>``.  Every teacher here minimizes (a proxy of)
``eta^2 T1 - 2 eta T2`` over the examples it is capable of producing:

* pool selection scans a finite candidate pool;
* synthesis emits ``gamma * (w - w*)`` with a per-loss closed-form scale;
* combination reproduces the synthesis example as a linear combination
  of pool items (requires the target direction to lie in their span);
* rescalable pool selection scans pool directions times a signed
  log-spaced grid of norms;
* the surrogate teacher replaces T2 by its convexity lower bound so it
  only needs the student's predictions, never its weights;
* the imitation teacher tracks the student in its own feature space by
  regressing on observed predictions, then selects as if omniscient
  against its own estimate.

Tie-breaking is deterministic everywhere: lowest index first, then the
smaller scale magnitude, then positive sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import (
    DimensionError,
    EmptyPoolError,
    LabelDomainError,
    NormBoundError,
    SpanViolationError,
)
from .linalg import least_squares_min_norm
from .losses import (
    LossKind,
    RegularizedLoss,
    intensity,
    intensity_many,
    value_many,
)
from .validation import as_matrix, as_vector, check_same_dimension

_TINY_DISTANCE = 1e-150  # below this, w and w* are treated as identical


# ---------------------------------------------------------------------------
# Candidate pools


@dataclass
class Pool:
    """A finite candidate set plus the radius bounding its examples."""

    X: np.ndarray
    y: np.ndarray
    R: float

    def __post_init__(self):
        self.X = as_matrix(self.X, "pool X")
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.y.ndim != 1 or self.y.shape[0] != self.X.shape[0]:
            raise DimensionError(
                f"pool labels shape {self.y.shape} does not match {self.X.shape[0]} examples"
            )
        if self.R <= 0:
            raise ValueError(f"pool radius must be > 0, got {self.R}")
        norms = np.linalg.norm(self.X, axis=1)
        if norms.size and float(norms.max()) > self.R + 1e-12:
            raise ValueError(
                f"pool example norm {norms.max():.6g} exceeds radius {self.R:.6g}"
            )
        self._norms = norms
        self._sqnorms = norms**2

    @classmethod
    def from_arrays(cls, X, y, R: float | None = None) -> "Pool":
        """Build a pool; the radius defaults to the largest example norm."""
        X = as_matrix(X, "pool X")
        if R is None:
            norms = np.linalg.norm(X, axis=1)
            R = float(norms.max()) if norms.size and norms.max() > 0 else 1.0
        return cls(X, np.asarray(y, dtype=np.float64), float(R))

    @property
    def examples(self) -> list[tuple[np.ndarray, float]]:
        return [(self.X[i], float(self.y[i])) for i in range(len(self))]

    def __len__(self) -> int:
        return self.X.shape[0]


def _require_nonempty(pool: Pool) -> None:
    if len(pool) == 0:
        raise EmptyPoolError("candidate pool is empty")


# ---------------------------------------------------------------------------
# The selection objective


@dataclass(frozen=True)
class SelectionObjective:
    """Difficulty, usefulness and their learning-rate-weighted combination."""

    t1: float
    t2: float
    combined: float


def selection_objective(
    w, w_star, loss: RegularizedLoss, eta: float, x, y: float
) -> SelectionObjective:
    """Evaluate T1, T2 and ``eta^2 T1 - 2 eta T2`` for one example.

    The gradient includes the ``lam * w`` term, i.e. exactly what moves
    the student, so ``combined`` equals the realized one-step change of
    ``||w - w*||^2``.
    """
    w = as_vector(w, "w")
    w_star = as_vector(w_star, "w_star")
    x = as_vector(x, "x")
    check_same_dimension(w, w_star, "w and w_star")
    check_same_dimension(w, x, "w and x")
    beta = intensity(loss.kind, float(w @ x), y)
    g = beta * x
    if loss.lam:
        g = g + loss.lam * w
    t1 = float(g @ g)
    t2 = float((w - w_star) @ g)
    return SelectionObjective(t1, t2, eta * eta * t1 - 2.0 * eta * t2)


def pool_objectives(
    w, w_star, loss: RegularizedLoss, eta: float, pool: Pool
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (t1, t2, combined) arrays over a whole pool."""
    w = as_vector(w, "w")
    w_star = as_vector(w_star, "w_star")
    if pool.X.shape[1] != w.shape[0]:
        raise DimensionError(
            f"pool dimension {pool.X.shape[1]} does not match weights {w.shape[0]}"
        )
    delta = w - w_star
    z = pool.X @ w
    beta = intensity_many(loss.kind, z, pool.y)
    t1 = beta**2 * pool._sqnorms
    t2 = beta * (pool.X @ delta)
    if loss.lam:
        lam = loss.lam
        t1 = t1 + 2.0 * lam * beta * z + lam * lam * float(w @ w)
        t2 = t2 + lam * float(delta @ w)
    combined = eta * eta * t1 - 2.0 * eta * t2
    return t1, t2, combined


# ---------------------------------------------------------------------------
# Baselines and omniscient selection


def random_select(pool: Pool, rng: np.random.Generator) -> tuple[int, tuple[np.ndarray, float]]:
    """Uniform draw from the pool with the run's generator."""
    _require_nonempty(pool)
    i = int(rng.integers(0, len(pool)))
    return i, (pool.X[i], float(pool.y[i]))


def omniscient_pool_select(
    w, w_star, loss: RegularizedLoss, eta: float, pool: Pool
) -> tuple[int, tuple[np.ndarray, float], SelectionObjective]:
    """Exhaustive scan for the pool example minimizing ``combined``.

    Ties break to the lowest index.
    """
    _require_nonempty(pool)
    t1, t2, combined = pool_objectives(w, w_star, loss, eta, pool)
    i = int(np.argmin(combined))
    obj = SelectionObjective(float(t1[i]), float(t2[i]), float(combined[i]))
    return i, (pool.X[i], float(pool.y[i])), obj


# ---------------------------------------------------------------------------
# Synthesis and combination


@dataclass(frozen=True)
class SynthesisResult:
    """A constructed example, its scale, and the intensity lower bound."""

    x: np.ndarray
    y: float
    gamma: float
    nu: float
    converged: bool


def _check_target_norm(kind: LossKind, w_star: np.ndarray) -> None:
    n = float(np.linalg.norm(w_star))
    if n > 1.0 + 1e-12:
        raise NormBoundError(
            f"{kind.value} synthesis requires ||w*|| <= 1, got {n:.6g}; "
            "rescale the data rather than the target"
        )


def omniscient_synthesize(
    w,
    w_star,
    kind: LossKind,
    eta: float,
    R: float,
    initial_distance: float | None = None,
) -> SynthesisResult:
    """Construct ``x_hat = gamma * (w - w*)`` with the per-loss scale.

    * absolute: ``gamma = min(R/ref, 1/eta)``, label ``<w*, x_hat>``;
    * square:   ``gamma = min(1/(sqrt(2 eta) d), R/d)`` at the current
      distance ``d``, label ``<w*, x_hat>``;
    * hinge / logistic: label -1, ``gamma = min(1/eta, R/ref)``,
      requiring ``||w*|| <= 1``.

    ``ref`` is ``initial_distance`` when the caller pins the scale to
    the start of a run (the losses with run-constant gamma), else the
    current distance.  ``nu`` is the closed-form lower bound on
    ``gamma * intensity``, the per-step contraction certificate input.
    At ``w == w*`` a zero example with ``converged=True`` is returned.
    """
    w = as_vector(w, "w")
    w_star = as_vector(w_star, "w_star")
    check_same_dimension(w, w_star, "w and w_star")
    if eta <= 0:
        raise ValueError(f"eta must be > 0, got {eta}")
    if R <= 0:
        raise ValueError(f"R must be > 0, got {R}")
    delta = w - w_star
    dist = float(np.linalg.norm(delta))
    if dist < _TINY_DISTANCE:
        return SynthesisResult(np.zeros_like(w), 0.0, 0.0, 0.0, True)
    ref = dist if initial_distance is None else float(initial_distance)

    if kind is LossKind.ABSOLUTE:
        gamma = min(R / ref, 1.0 / eta)
        nu = gamma
        x = gamma * delta
        y = float(w_star @ x)
    elif kind is LossKind.SQUARE:
        gamma = min(1.0 / (np.sqrt(2.0 * eta) * dist), R / dist)
        # gamma * intensity = 2 (gamma * dist)^2, constant along the run.
        nu = 2.0 * min(1.0 / np.sqrt(2.0 * eta), R) ** 2
        x = gamma * delta
        y = float(w_star @ x)
    elif kind in (LossKind.HINGE, LossKind.LOGISTIC):
        _check_target_norm(kind, w_star)
        gamma = min(1.0 / eta, R / ref)
        nu = gamma if kind is LossKind.HINGE else gamma / (1.0 + np.exp(gamma))
        x = gamma * delta
        y = -1.0
    else:
        raise AssertionError(kind)
    return SynthesisResult(x, y, float(gamma), float(nu), False)


@dataclass(frozen=True)
class CombinationPlan:
    """Coefficients expressing a synthesis example over pool items."""

    alphas: np.ndarray
    residual: float


def omniscient_combine(
    w,
    w_star,
    kind: LossKind,
    eta: float,
    pool: Pool,
    initial_distance: float | None = None,
) -> tuple[CombinationPlan, np.ndarray, float]:
    """Reproduce the synthesis example as a combination of pool items.

    Solves the minimum-norm system ``sum_i alpha_i x_i = gamma (w - w*)``
    and emits the reconstructed example, which equals the synthesis
    example up to solver rounding.  If the target direction is not in
    the pool's span (relative residual above 1e-6) a
    SpanViolationError is raised.
    """
    _require_nonempty(pool)
    synth = omniscient_synthesize(w, w_star, kind, eta, pool.R, initial_distance)
    if synth.converged:
        return CombinationPlan(np.zeros(len(pool)), 0.0), synth.x, synth.y
    target = synth.x
    alphas, residual = least_squares_min_norm(pool.X.T, target)
    scale = float(np.linalg.norm(target))
    if residual > 1e-6 * scale:
        raise SpanViolationError(
            f"target direction not in pool span: residual {residual:.3e} "
            f"exceeds 1e-6 * ||target|| = {1e-6 * scale:.3e}"
        )
    x = pool.X.T @ alphas
    y = float(as_vector(w_star, "w_star") @ x) if not kind.is_classification else synth.y
    return CombinationPlan(alphas, residual), x, y


# ---------------------------------------------------------------------------
# Rescalable pool selection


def rescalable_pool_select(
    w,
    w_star,
    loss: RegularizedLoss,
    eta: float,
    pool: Pool,
    grid_size: int = 64,
) -> tuple[int, float, tuple[np.ndarray, float], SelectionObjective]:
    """Scan pool directions times a signed log-spaced grid of norms.

    Candidates are ``s * x_i / ||x_i||`` for both signs of ``s``, with
    ``s`` log-spaced over [1e-6 R, R] (``grid_size`` points) plus the
    example's own norm so the raw pool is always dominated.  Returns
    the winning pool index, the signed factor ``gamma`` applied to the
    raw example (``x_hat = gamma * x_i``), the emitted example and its
    objective.  Ties break to lowest index, then smaller |gamma|, then
    positive sign.
    """
    _require_nonempty(pool)
    w = as_vector(w, "w")
    w_star = as_vector(w_star, "w_star")
    if np.any(pool._norms == 0.0):
        raise ValueError("rescalable selection requires all pool examples non-zero")
    n = len(pool)
    R = pool.R
    base = np.logspace(np.log10(1e-6 * R), np.log10(R), grid_size)
    # (n, grid_size + 1): shared grid plus each example's own norm.
    scales = np.hstack(
        [np.broadcast_to(base, (n, grid_size)), np.minimum(pool._norms, R)[:, None]]
    )
    delta = w - w_star
    zu = (pool.X @ w) / pool._norms  # <w, x_i/||x_i||>
    du = (pool.X @ delta) / pool._norms
    lam = loss.lam
    lam_t1 = lam * lam * float(w @ w)
    lam_t2 = lam * float(delta @ w)

    best = None  # (combined, index, |gamma|, sign_rank, s, sign)
    for sign, sign_rank in ((1.0, 0), (-1.0, 1)):
        z = sign * scales * zu[:, None]
        beta = intensity_many(loss.kind, z, np.broadcast_to(pool.y[:, None], z.shape))
        t1 = beta**2 * scales**2
        t2 = beta * (sign * scales * du[:, None])
        if lam:
            t1 = t1 + 2.0 * lam * beta * z + lam_t1
            t2 = t2 + lam_t2
        combined = eta * eta * t1 - 2.0 * eta * t2
        gammas = scales / pool._norms[:, None]
        idx = np.arange(n)[:, None].repeat(scales.shape[1], axis=1)
        order = np.lexsort(
            (gammas.ravel(), idx.ravel(), combined.ravel())
        )
        k = order[0]
        cand = (
            float(combined.ravel()[k]),
            int(idx.ravel()[k]),
            float(gammas.ravel()[k]),
            sign_rank,
            float(scales.ravel()[k]),
            sign,
        )
        if best is None or cand[:4] < best[:4]:
            best = cand
    _, i, gamma_abs, _, s, sign = best
    gamma = sign * gamma_abs
    x = sign * s * pool.X[i] / pool._norms[i]
    y = float(pool.y[i])
    obj = selection_objective(w, w_star, loss, eta, x, y)
    return i, gamma, (x, y), obj


# ---------------------------------------------------------------------------
# Prediction-only access to the student


class StudentQuery:
    """The restricted interface less-informative teachers hold.

    Wraps a callable returning the live learner state, plus an optional
    map from the teacher's representation to the student's.  Exposes
    predictions only; every served row is counted on the learner.
    """

    def __init__(
        self,
        get_state: Callable[[], "object"],
        to_student: Callable[[np.ndarray], np.ndarray] | None = None,
    ):
        self._get_state = get_state
        self._to_student = to_student

    def predict(self, x_teacher) -> float:
        x = as_vector(x_teacher, "x")
        if self._to_student is not None:
            x = self._to_student(x[None, :])[0]
        state = self._get_state()
        state.query_count += 1
        return float(state.w @ x)

    def predict_many(self, X_teacher) -> np.ndarray:
        X = as_matrix(X_teacher, "X")
        if self._to_student is not None:
            X = self._to_student(X)
        state = self._get_state()
        state.query_count += X.shape[0]
        return X @ state.w


# ---------------------------------------------------------------------------
# Surrogate teacher


def _surrogate_scan(
    query: StudentQuery,
    target: np.ndarray,
    kind: LossKind,
    eta: float,
    pool: Pool,
) -> tuple[int, np.ndarray]:
    z = query.predict_many(pool.X)
    beta = intensity_many(kind, z, pool.y)
    t1 = beta**2 * pool._sqnorms  # lam term unknowable without w
    z_star = pool.X @ target
    gap = value_many(kind, z, pool.y) - value_many(kind, z_star, pool.y)
    values = eta * eta * t1 - 2.0 * eta * gap
    return int(np.argmin(values)), values


def surrogate_select(
    query: StudentQuery,
    target,
    kind: LossKind,
    eta: float,
    pool: Pool,
) -> tuple[int, tuple[np.ndarray, float]]:
    """Select by the convexity lower bound of the usefulness term.

    Minimizes ``eta^2 |intensity|^2 ||x||^2 - 2 eta (loss(z, y) -
    loss(<target, x>, y))`` where ``z`` comes from the student's
    prediction surface; one query per candidate, ties to lowest index.
    ``target`` is the optimum in the space where the pool lives (the
    student's own optimum in same-space mode, the teacher's in
    cross-space mode).
    """
    _require_nonempty(pool)
    target = as_vector(target, "target")
    i, _ = _surrogate_scan(query, target, kind, eta, pool)
    return i, (pool.X[i], float(pool.y[i]))


# ---------------------------------------------------------------------------
# Imitation teacher


@dataclass
class ImitationState:
    """The teacher's running estimate of the student, in its own space."""

    v: np.ndarray
    v_star: np.ndarray
    eta_v: float

    def __post_init__(self):
        self.v = as_vector(self.v, "v")
        self.v_star = as_vector(self.v_star, "v_star")
        check_same_dimension(self.v, self.v_star, "v and v_star")
        if self.eta_v <= 0:
            raise ValueError(f"eta_v must be > 0, got {self.eta_v}")


def imitation_fit_step(
    state: ImitationState, x_teacher, student_output: float
) -> ImitationState:
    """One regression step of v onto the student's observed output:
    ``v <- v - eta_v (<v, x> - output) x``."""
    x = as_vector(x_teacher, "x")
    check_same_dimension(state.v, x, "v and x")
    resid = float(state.v @ x) - float(student_output)
    return ImitationState(state.v - state.eta_v * resid * x, state.v_star, state.eta_v)


def imitation_select(
    state: ImitationState, kind: LossKind, eta: float, pool: Pool
) -> tuple[int, tuple[np.ndarray, float]]:
    """Omniscient-style selection against (v, v*) in teacher space.

    Uses the bare loss gradient (no regularization term; the teacher
    cannot see the student's); ties to lowest index.
    """
    _require_nonempty(pool)
    _, _, combined = pool_objectives(
        state.v, state.v_star, RegularizedLoss(kind, 0.0), eta, pool
    )
    i = int(np.argmin(combined))
    return i, (pool.X[i], float(pool.y[i]))


# ---------------------------------------------------------------------------
# Stateful policies driving one run each


@dataclass(frozen=True)
class Decision:
    """What a teacher hands the harness for one round."""

    index: int  # pool index, or -1 for constructed examples / batch steps
    x: np.ndarray | None  # constructed example (student space), else None
    y: float
    gamma: float
    objective: float  # the criterion value the teacher minimized (nan if none)
    batch: bool = False


class RandomPoolTeacher:
    """Baseline: uniform pool draws."""

    def __init__(self, pool: Pool, rng: np.random.Generator):
        self.pool = pool
        self.rng = rng

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        i, (x, y) = random_select(self.pool, self.rng)
        obj = selection_objective(get_w(), w_star, loss, eta, x, y)
        return Decision(i, None, y, float("nan"), obj.combined)


class RandomBallTeacher:
    """Baseline: fresh uniform draws from the radius-R ball each round.

    Labels are the target model's own outputs, so the target stays the
    optimum of the sampling distribution.  Regression losses only.
    With ``bias=True`` the ball is sampled in the raw feature space (one
    dimension less than the weights) and a constant-1 coordinate is
    appended, matching the learner pipeline's augmentation.
    """

    def __init__(
        self,
        R: float,
        w_star: np.ndarray,
        kind: LossKind,
        rng: np.random.Generator,
        bias: bool = True,
    ):
        if kind.is_classification:
            raise LabelDomainError(
                "the ball baseline labels examples by <w*, x>; use a finite pool "
                "for classification losses"
            )
        self.R = float(R)
        self.w_star = as_vector(w_star, "w_star")
        self.rng = rng
        self.bias = bias

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        d = self.w_star.shape[0] - (1 if self.bias else 0)
        direction = self.rng.standard_normal(d)
        direction /= np.linalg.norm(direction)
        radius = self.R * self.rng.uniform() ** (1.0 / d)
        x = radius * direction
        if self.bias:
            x = np.concatenate([x, [1.0]])
        y = float(self.w_star @ x)
        obj = selection_objective(get_w(), w_star, loss, eta, x, y)
        return Decision(-1, x, y, float("nan"), obj.combined)


class BatchTeacher:
    """Baseline: the student takes a full-batch gradient step each round."""

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        return Decision(-1, None, float("nan"), float("nan"), float("nan"), batch=True)


class OmniscientPoolTeacher:
    def __init__(self, pool: Pool):
        self.pool = pool

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        i, (x, y), obj = omniscient_pool_select(get_w(), w_star, loss, eta, self.pool)
        return Decision(i, None, y, float("nan"), obj.combined)


class SynthesisTeacher:
    """Omniscient synthesis over the radius-R ball.

    The scale reference distance is pinned at the first round for the
    losses whose construction uses the initial discrepancy.
    """

    def __init__(self, R: float, kind: LossKind):
        self.R = float(R)
        self.kind = kind
        self.initial_distance: float | None = None
        self.nu: float | None = None

    def _reference(self, w, w_star) -> float | None:
        if self.kind is LossKind.SQUARE:
            return None  # square's gamma tracks the current distance
        if self.initial_distance is None:
            self.initial_distance = float(np.linalg.norm(w - w_star))
        return self.initial_distance

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        w = get_w()
        res = omniscient_synthesize(
            w, w_star, self.kind, eta, self.R, self._reference(w, w_star)
        )
        if self.nu is None and not res.converged:
            self.nu = res.nu
        if res.converged:
            return Decision(-1, res.x, res.y, 0.0, 0.0)
        obj = selection_objective(w, w_star, loss, eta, res.x, res.y)
        return Decision(-1, res.x, res.y, res.gamma, obj.combined)


class CombinationTeacher:
    """Synthesis reproduced through linear combinations of a pool."""

    def __init__(self, pool: Pool):
        self.pool = pool
        self.kind: LossKind | None = None
        self.initial_distance: float | None = None
        self.nu: float | None = None

    def _reference(self, w, w_star, kind) -> float | None:
        if kind is LossKind.SQUARE:
            return None
        if self.initial_distance is None:
            self.initial_distance = float(np.linalg.norm(w - w_star))
        return self.initial_distance

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        w = get_w()
        ref = self._reference(w, w_star, loss.kind)
        synth = omniscient_synthesize(w, w_star, loss.kind, eta, self.pool.R, ref)
        if self.nu is None and not synth.converged:
            self.nu = synth.nu
        if synth.converged:
            return Decision(-1, synth.x, synth.y, 0.0, 0.0)
        _, x, y = omniscient_combine(w, w_star, loss.kind, eta, self.pool, ref)
        obj = selection_objective(w, w_star, loss, eta, x, y)
        return Decision(-1, x, y, synth.gamma, obj.combined)


class RescalablePoolTeacher:
    def __init__(self, pool: Pool, grid_size: int = 64):
        self.pool = pool
        self.grid_size = int(grid_size)

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        i, gamma, (x, y), obj = rescalable_pool_select(
            get_w(), w_star, loss, eta, self.pool, self.grid_size
        )
        return Decision(i, x, y, gamma, obj.combined)


class SurrogateTeacher:
    """Prediction-only teacher; ``target`` lives in the pool's space."""

    def __init__(self, pool: Pool, target: np.ndarray, kind: LossKind, query: StudentQuery):
        self.pool = pool
        self.target = as_vector(target, "target")
        self.kind = kind
        self.query = query

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        i, values = _surrogate_scan(self.query, self.target, self.kind, eta, self.pool)
        return Decision(i, None, float(self.pool.y[i]), float("nan"), float(values[i]))


class ImitationTeacher:
    """Tracks the student by regression on its outputs, then selects.

    Each round performs exactly one fit step on the previous round's
    example (a randomly drawn pool example before round one), then an
    omniscient-style selection against (v, v*) in the teacher's space.
    ``warm_start`` extra fit steps on random pool probes may run before
    the first round; every fit costs one student query.
    """

    def __init__(
        self,
        pool: Pool,
        v0: np.ndarray,
        v_star: np.ndarray,
        eta_v: float,
        kind: LossKind,
        query: StudentQuery,
        rng: np.random.Generator,
        warm_start: int = 0,
    ):
        self.pool = pool
        self.state = ImitationState(v0, v_star, eta_v)
        self.kind = kind
        self.query = query
        self.rng = rng
        for _ in range(int(warm_start)):
            i, (x, _) = random_select(pool, rng)
            self.state = imitation_fit_step(self.state, x, self.query.predict(x))
        i, (x0, _) = random_select(pool, rng)
        self._last_x = x0

    def next_decision(self, get_w, w_star, loss, eta) -> Decision:
        self.state = imitation_fit_step(
            self.state, self._last_x, self.query.predict(self._last_x)
        )
        i, (x, y) = imitation_select(self.state, self.kind, eta, self.pool)
        self._last_x = x
        obj = selection_objective(
            self.state.v, self.state.v_star, RegularizedLoss(self.kind, 0.0), eta, x, y
        )
        return Decision(i, None, y, float("nan"), obj.combined)
