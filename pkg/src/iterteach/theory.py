"""Certificates and diagnostics for teaching runs.

* ``teaching_volume`` is the best achievable one-step decrease of
  ``||w - w*||^2`` over a candidate pool; ``remaining_effort`` is the
  squared distance minus that volume.
* ``pool_volume`` measures the worst-case directional coverage of a
  pool: the minimum over unit directions u in the pool's span of the
  maximum |cosine| between u and a pool example.  The cosine
  (normalized) form is used so the value is scale-invariant, equals 1
  for a dense ball, and lies in (0, 1] for any spanning pool; examples
  and their negations are treated alike because a rescaling teacher
  can flip signs.
* ``certify_run`` checks the per-step contraction
  ``||w_{t+1} - w*|| <= (1 - eta nu) ||w_t - w*||`` along a recorded
  trajectory and reports the rate, the iteration constant
  ``(log 1/(1 - eta nu))^-1`` and the implied steps to reach accuracy
  epsilon; violations are recorded, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import EmptyPoolError
from .losses import RegularizedLoss
from .rng import make_rng
from .teachers import Pool, pool_objectives
from .validation import as_vector


def teaching_volume(w, w_star, loss: RegularizedLoss, eta: float, pool: Pool) -> float:
    """Max over the pool of ``-eta^2 T1 + 2 eta T2`` (exhaustive scan)."""
    if len(pool) == 0:
        raise EmptyPoolError("candidate pool is empty")
    _, _, combined = pool_objectives(w, w_star, loss, eta, pool)
    return float(-combined.min())


def remaining_effort(w, w_star, loss: RegularizedLoss, eta: float, pool: Pool) -> float:
    """``||w - w*||^2`` minus the teaching volume at ``w``."""
    w = as_vector(w, "w")
    w_star = as_vector(w_star, "w_star")
    delta = w - w_star
    return float(delta @ delta) - teaching_volume(w, w_star, loss, eta, pool)


# ---------------------------------------------------------------------------
# Pool volume


@dataclass(frozen=True)
class PoolVolumeReport:
    """Worst-case directional coverage of a pool."""

    value: float
    argmin_direction: np.ndarray
    method: str  # "grid" or "refined"


def pool_volume(
    pool: Pool,
    grid_points: int = 2**14,
    refine_iters: int = 100,
    seed: int = 0,
) -> PoolVolumeReport:
    """Minimize directional coverage over sampled unit directions.

    Directions are sampled quasi-uniformly inside the pool's span
    (normalized Gaussian draws from a fixed-seed generator), then the
    incumbent is polished by shrinking-step coordinate perturbations.
    Deterministic given ``seed``.
    """
    if len(pool) == 0:
        raise EmptyPoolError("candidate pool is empty")
    norms = pool._norms
    keep = norms > 0
    if not np.any(keep):
        raise ValueError("pool volume needs at least one non-zero example")
    U = pool.X[keep] / norms[keep, None]

    # Orthonormal basis of span(pool).
    _, s, vt = np.linalg.svd(U, full_matrices=False)
    rank = int(np.sum(s > s[0] * 1e-12)) if s.size else 0
    Q = vt[:rank].T  # (d, k)
    k = Q.shape[1]
    P = U @ Q  # coverage of direction Q c is max |P @ c|

    def coverage(c: np.ndarray) -> float:
        return float(np.max(np.abs(P @ c)))

    rng = make_rng(seed)
    best_val = math.inf
    best_c = None
    chunk = 4096
    remaining = int(grid_points)
    while remaining > 0:
        m = min(chunk, remaining)
        C = rng.standard_normal((m, k))
        C /= np.linalg.norm(C, axis=1, keepdims=True)
        vals = np.max(np.abs(C @ P.T), axis=1)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_c = C[i].copy()
        remaining -= m

    method = "grid"
    if refine_iters > 0 and k > 1:
        method = "refined"
        step = 0.25
        for _ in range(int(refine_iters)):
            improved = False
            for j in range(k):
                for sign in (1.0, -1.0):
                    c_try = best_c.copy()
                    c_try[j] += sign * step
                    c_try /= np.linalg.norm(c_try)
                    v = coverage(c_try)
                    if v < best_val:
                        best_val, best_c = v, c_try
                        improved = True
            if not improved:
                step *= 0.5
                if step < 1e-12:
                    break

    return PoolVolumeReport(best_val, Q @ best_c, method)


# ---------------------------------------------------------------------------
# Contraction certificates


@dataclass(frozen=True)
class TeachabilityCertificate:
    """Per-run record of the contraction bound and its verification."""

    gamma: float | None
    nu: float
    rate: float
    c1: float
    required_steps: int
    violations: list[tuple[int, float]] = field(default_factory=list)
    mu: float | None = None
    c2: float | None = None

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "nu": self.nu,
            "mu": self.mu,
            "rate": self.rate,
            "c1": self.c1,
            "c2": self.c2,
            "required_steps": self.required_steps,
            "valid": self.valid,
            "violations": [[int(t), float(r)] for t, r in self.violations],
        }


def _scan_violations(
    ws: np.ndarray, w_star: np.ndarray, rate: float
) -> list[tuple[int, float]]:
    dists = np.linalg.norm(ws - w_star[None, :], axis=1)
    # Absolute slack covers the rounding of a single update; without it a
    # rate-zero (one-step) run would flag ~1e-16 float dust.
    slack = 1e-12 * (float(np.linalg.norm(w_star)) + 1.0)
    violations: list[tuple[int, float]] = []
    for t in range(len(dists) - 1):
        allowed = rate * dists[t] * (1.0 + 1e-9) + slack * max(dists[t], 1.0)
        if dists[t + 1] > allowed:
            ratio = dists[t + 1] / dists[t] if dists[t] > 0 else math.inf
            violations.append((t, float(ratio)))
    return violations


def _steps_to_epsilon(c: float, dist0: float, epsilon: float) -> int:
    if dist0 <= epsilon:
        return 0
    return int(math.ceil(c * math.log(dist0 / epsilon)))


def certify_run(
    ws,
    w_star,
    eta: float,
    nu: float,
    epsilon: float = 1e-6,
    gamma: float | None = None,
) -> TeachabilityCertificate:
    """Check ``||w_{t+1}-w*|| <= (1 - eta nu) ||w_t-w*||`` along a run.

    ``ws`` is the weight trajectory (one row per iterate, length >= 2).
    The rate must land in [0, 1), i.e. ``0 < eta * nu <= 1``.
    """
    ws = np.atleast_2d(np.asarray(ws, dtype=np.float64))
    w_star = as_vector(w_star, "w_star")
    if ws.shape[0] < 2:
        raise ValueError("trajectory must contain at least 2 iterates")
    if nu <= 0:
        raise ValueError(f"nu must be > 0, got {nu}")
    rate = 1.0 - eta * nu
    if -1e-12 <= rate < 0.0:
        rate = 0.0  # eta * (1/eta) can land one ulp above 1
    if not (0.0 <= rate < 1.0):
        raise ValueError(f"contraction rate 1 - eta*nu = {rate} outside [0, 1)")
    violations = _scan_violations(ws, w_star, rate)
    c1 = 0.0 if rate == 0.0 else 1.0 / math.log(1.0 / rate)
    dist0 = float(np.linalg.norm(ws[0] - w_star))
    return TeachabilityCertificate(
        gamma=gamma,
        nu=float(nu),
        rate=float(rate),
        c1=float(c1),
        required_steps=_steps_to_epsilon(c1, dist0, epsilon),
        violations=violations,
    )


def rescalable_rate(eta: float, nu: float, mu: float, volume: float) -> float:
    """Squared per-step factor for rescaled-pool teaching.

    ``r = max over b in {nu, mu} of (1 + eta^2 b^2 - 2 eta b V)``; the
    per-step distance contraction is sqrt(r).
    """
    r = max(
        1.0 + eta * eta * mu * mu - 2.0 * eta * mu * volume,
        1.0 + eta * eta * nu * nu - 2.0 * eta * nu * volume,
    )
    return float(r)


def certify_run_rescalable(
    ws,
    w_star,
    eta: float,
    nu: float,
    mu: float,
    volume: float,
    epsilon: float = 1e-6,
    gamma: float | None = None,
) -> TeachabilityCertificate:
    """Certificate against the rescaled-pool rate ``sqrt(r)``."""
    ws = np.atleast_2d(np.asarray(ws, dtype=np.float64))
    w_star = as_vector(w_star, "w_star")
    if ws.shape[0] < 2:
        raise ValueError("trajectory must contain at least 2 iterates")
    if not (0 < nu <= mu):
        raise ValueError(f"need 0 < nu <= mu, got nu={nu}, mu={mu}")
    r = rescalable_rate(eta, nu, mu, volume)
    if -1e-12 <= r < 0.0:
        r = 0.0
    if not (0.0 <= r < 1.0):
        raise ValueError(f"rescalable rate r = {r} outside [0, 1)")
    rate = math.sqrt(r)
    violations = _scan_violations(ws, w_star, rate)
    c1 = 0.0 if rate == 0.0 else 1.0 / math.log(1.0 / rate)
    c2 = 0.0 if r == 0.0 else 2.0 / math.log(1.0 / r)
    dist0 = float(np.linalg.norm(ws[0] - w_star))
    return TeachabilityCertificate(
        gamma=gamma,
        nu=float(nu),
        rate=float(rate),
        c1=float(c1),
        required_steps=_steps_to_epsilon(c1, dist0, epsilon),
        violations=violations,
        mu=float(mu),
        c2=float(c2),
    )
