"""Teaching volume, pool volume and contraction certificates."""

import numpy as np
import pytest

from iterteach.learner import LearnerState, sgd_step
from iterteach.losses import LossKind, RegularizedLoss
from iterteach.rng import make_rng
from iterteach.teachers import Pool, omniscient_pool_select, omniscient_synthesize
from iterteach.theory import (
    certify_run,
    certify_run_rescalable,
    pool_volume,
    remaining_effort,
    rescalable_rate,
    teaching_volume,
)

SQ0 = RegularizedLoss(LossKind.SQUARE, 0.0)


def scaled_direction_pool(w, w_star, gammas):
    """Pool of scaled discrepancy directions with consistent labels."""
    delta = np.asarray(w, float) - np.asarray(w_star, float)
    X = np.outer(gammas, delta)
    y = X @ np.asarray(w_star, float)
    return Pool.from_arrays(X, y)


class TestTeachingVolume:
    def test_reference_pool(self):
        pool = Pool.from_arrays(np.eye(2), [0.0, 0.0], R=1.0)
        tv = teaching_volume([1.0, 0.0], [0.0, 0.0], SQ0, 0.1, pool)
        assert tv == pytest.approx(0.36, abs=1e-15)

    def test_zero_at_target_with_consistent_labels(self):
        w_star = np.array([0.5, -0.5])
        pool = scaled_direction_pool([1.0, 0.0], w_star, np.linspace(0.1, 2.0, 9))
        tv = teaching_volume(w_star, w_star, SQ0, 0.1, pool)
        assert tv == pytest.approx(0.0, abs=1e-15)

    def test_one_step_regime_equals_squared_distance(self):
        # Dense scan of the discrepancy ray: the best one-step decrease
        # captures the entire remaining squared distance.
        eta = 0.1
        w = np.array([1.0, 0.0])
        w_star = np.array([0.0, 0.0])
        gamma_star = 1.0 / np.sqrt(2.0 * eta)
        pool = scaled_direction_pool(w, w_star, np.linspace(0.5 * gamma_star, 2.0 * gamma_star, 20001))
        tv = teaching_volume(w, w_star, SQ0, eta, pool)
        assert tv == pytest.approx(1.0, abs=1e-6)

    def test_equals_negated_best_selection(self):
        rng = make_rng(3)
        pool = Pool.from_arrays(rng.standard_normal((40, 3)), rng.standard_normal(40))
        w = rng.standard_normal(3)
        w_star = rng.standard_normal(3)
        _, _, obj = omniscient_pool_select(w, w_star, SQ0, 0.05, pool)
        tv = teaching_volume(w, w_star, SQ0, 0.05, pool)
        assert tv == -obj.combined


class TestRemainingEffort:
    def test_zero_in_one_step_regime(self):
        eta = 0.1
        w = np.array([1.0, 0.0])
        w_star = np.zeros(2)
        gamma_star = 1.0 / np.sqrt(2.0 * eta)
        pool = scaled_direction_pool(w, w_star, np.linspace(0.5 * gamma_star, 2.0 * gamma_star, 20001))
        assert remaining_effort(w, w_star, SQ0, eta, pool) == pytest.approx(0.0, abs=1e-6)

    def test_zero_at_target(self):
        w_star = np.array([0.3, 0.7])
        pool = scaled_direction_pool([1.0, 1.0], w_star, np.linspace(0.1, 1.5, 7))
        assert remaining_effort(w_star, w_star, SQ0, 0.1, pool) == 0.0

    def test_monotone_along_discrepancy_scalings(self):
        # Closer iterates need no more remaining effort than farther ones.
        rng = make_rng(11)
        eta = 0.05
        w_star = rng.standard_normal(2)
        direction_grid = np.linspace(0.05, 3.0, 400)
        for _ in range(100):
            u = rng.standard_normal(2)
            u /= np.linalg.norm(u)
            pool = scaled_direction_pool(w_star + u, w_star, direction_grid)
            c1, c2 = np.sort(rng.uniform(0.2, 2.5, size=2))
            w1 = w_star + c1 * u
            w2 = w_star + c2 * u
            e1 = remaining_effort(w1, w_star, SQ0, eta, pool)
            e2 = remaining_effort(w2, w_star, SQ0, eta, pool)
            assert e1 <= e2 + 1e-9


class TestPoolVolume:
    def test_cross_pool_matches_angle_oracle(self):
        pool = Pool.from_arrays(
            [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
            [1.0, -1.0, 1.0, -1.0],
        )
        # Oracle: 1-D sweep of the angle; coverage is max(|cos|, |sin|).
        angles = np.linspace(0.0, 2.0 * np.pi, 100_000, endpoint=False)
        oracle = float(np.min(np.maximum(np.abs(np.cos(angles)), np.abs(np.sin(angles)))))
        assert oracle == pytest.approx(np.sqrt(2) / 2, abs=1e-9)
        report = pool_volume(pool)
        assert report.value == pytest.approx(oracle, abs=1e-3)

    def test_dense_ball_pool_is_full_coverage(self):
        rng = make_rng(21)
        theta = rng.uniform(0, 2 * np.pi, size=10_000)
        X = np.column_stack([np.cos(theta), np.sin(theta)])
        pool = Pool.from_arrays(X, np.ones(10_000))
        report = pool_volume(pool)
        assert report.value >= 0.99
        assert report.value <= 1.0

    def test_single_direction_span(self):
        pool = Pool.from_arrays([[1.0, 0.0, 0.0]], [1.0])
        report = pool_volume(pool)
        assert report.value == pytest.approx(1.0, abs=1e-12)

    def test_invariant_under_positive_rescaling(self):
        rng = make_rng(23)
        X = rng.standard_normal((12, 3))
        pool_a = Pool.from_arrays(X, np.ones(12))
        pool_b = Pool.from_arrays(X * rng.uniform(0.1, 10.0, size=(12, 1)), np.ones(12))
        va = pool_volume(pool_a).value
        vb = pool_volume(pool_b).value
        assert abs(va - vb) < 1e-9

    def test_monotone_under_inclusion(self):
        rng = make_rng(29)
        X = rng.standard_normal((8, 3))
        extra = rng.standard_normal((4, 3))
        small = Pool.from_arrays(X, np.ones(8))
        large = Pool.from_arrays(np.vstack([X, extra]), np.ones(12))
        assert pool_volume(small).value <= pool_volume(large).value + 1e-9

    def test_argmin_direction_attains_value(self):
        rng = make_rng(31)
        X = rng.standard_normal((10, 4))
        pool = Pool.from_arrays(X, np.ones(10))
        report = pool_volume(pool)
        U = X / np.linalg.norm(X, axis=1, keepdims=True)
        attained = float(np.max(np.abs(U @ report.argmin_direction)))
        assert attained == pytest.approx(report.value, rel=1e-9)


def synthesis_square_trajectory(w0, w_star, eta, R, steps):
    loss = RegularizedLoss(LossKind.SQUARE, 0.0)
    state = LearnerState(w=np.asarray(w0, float), eta=eta, loss=loss)
    ws = [state.w.copy()]
    nu = None
    for _ in range(steps):
        res = omniscient_synthesize(state.w, w_star, LossKind.SQUARE, eta, R)
        if res.converged:
            ws.append(state.w.copy())
            continue
        nu = res.nu if nu is None else min(nu, res.nu)
        state = sgd_step(state, res.x, res.y)
        ws.append(state.w.copy())
    return np.asarray(ws), nu


class TestCertifyRun:
    def test_one_step_boundary_has_rate_zero(self):
        w0 = np.array([1.0, 0.0])
        w_star = np.zeros(2)
        ws, nu = synthesis_square_trajectory(w0, w_star, eta=0.5, R=10.0, steps=3)
        cert = certify_run(ws, w_star, eta=0.5, nu=nu)
        assert cert.rate == 0.0
        assert cert.c1 == 0.0
        assert cert.violations == []
        assert cert.valid

    def test_exponential_regime_zero_violations(self):
        rng = make_rng(37)
        w_star = rng.standard_normal(5)
        w0 = w_star + rng.standard_normal(5)
        eta, R = 0.01, 2.0
        ws, nu = synthesis_square_trajectory(w0, w_star, eta, R, steps=150)
        cert = certify_run(ws, w_star, eta, nu, epsilon=1e-8)
        assert nu == pytest.approx(2 * R * R)
        assert cert.violations == []
        d0 = np.linalg.norm(w0 - w_star)
        assert cert.required_steps == int(np.ceil(cert.c1 * np.log(d0 / 1e-8)))

    def test_random_teacher_trace_violates(self):
        rng = make_rng(41)
        loss = RegularizedLoss(LossKind.SQUARE, 0.0)
        w_star = rng.standard_normal(4)
        state = LearnerState(w=w_star + rng.standard_normal(4), eta=0.01, loss=loss)
        ws = [state.w.copy()]
        for _ in range(60):
            x = rng.standard_normal(4) * 0.5
            y = float(w_star @ x)
            state = sgd_step(state, x, y)
            ws.append(state.w.copy())
        cert = certify_run(np.asarray(ws), w_star, eta=0.01, nu=8.0)
        assert len(cert.violations) > 0
        assert not cert.valid

    def test_constant_trace_at_target(self):
        w_star = np.array([1.0, 2.0])
        ws = np.tile(w_star, (5, 1))
        cert = certify_run(ws, w_star, eta=0.1, nu=1.0)
        assert cert.violations == []

    def test_zero_violations_across_seeds(self):
        for seed in range(50):
            rng = make_rng(1000 + seed)
            w_star = rng.standard_normal(4)
            w0 = w_star + rng.standard_normal(4)
            eta = float(rng.uniform(1e-3, 0.5))
            R = float(rng.uniform(0.1, 3.0))
            ws, nu = synthesis_square_trajectory(w0, w_star, eta, R, steps=40)
            cert = certify_run(ws, w_star, eta, nu)
            assert cert.violations == [], seed

    def test_parameter_validation(self):
        ws = np.zeros((3, 2))
        with pytest.raises(ValueError):
            certify_run(ws, np.zeros(2), eta=0.1, nu=0.0)
        with pytest.raises(ValueError):
            certify_run(ws, np.zeros(2), eta=2.0, nu=1.0)  # rate < 0
        with pytest.raises(ValueError):
            certify_run(ws[:1], np.zeros(2), eta=0.1, nu=1.0)

    def test_json_round_trip_fields(self):
        ws = np.array([[1.0, 0.0], [0.5, 0.0], [0.25, 0.0]])
        cert = certify_run(ws, np.zeros(2), eta=0.5, nu=1.0)
        payload = cert.to_json_dict()
        assert set(payload) == {
            "gamma", "nu", "mu", "rate", "c1", "c2",
            "required_steps", "valid", "violations",
        }
        assert payload["rate"] == 0.5


class TestRescalableRate:
    def test_hand_computed(self):
        r = rescalable_rate(eta=0.1, nu=1.0, mu=2.0, volume=0.5)
        expected = max(1 + 0.01 * 4 - 2 * 0.1 * 2 * 0.5, 1 + 0.01 - 2 * 0.1 * 0.5)
        assert r == pytest.approx(expected, abs=1e-15)

    def test_full_volume_nu_equals_mu_matches_synthesis(self):
        # With V = 1 and nu = mu the bound collapses to (1 - eta nu)^2.
        r = rescalable_rate(eta=0.1, nu=3.0, mu=3.0, volume=1.0)
        assert r == pytest.approx((1 - 0.1 * 3.0) ** 2, abs=1e-12)

    def test_certify_rescalable_on_contracting_run(self):
        ws = np.array([[1.0, 0.0], [0.8, 0.0], [0.64, 0.0], [0.512, 0.0]])
        cert = certify_run_rescalable(
            ws, np.zeros(2), eta=0.1, nu=2.0, mu=2.0, volume=1.0, epsilon=1e-3
        )
        assert cert.rate == pytest.approx(0.8, abs=1e-12)
        assert cert.mu == 2.0
        assert cert.c2 == pytest.approx(2.0 / np.log(1.0 / 0.64), rel=1e-12)
        assert cert.violations == []
