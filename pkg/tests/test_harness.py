"""Configs, runs, traces, replay, compare and the CLI."""

import json

import numpy as np
import pytest

from iterteach.cli import main
from iterteach.exceptions import ConfigError, NormBoundError
from iterteach.harness import (
    DataSpec,
    ExperimentConfig,
    TeacherSpec,
    TRACE_COLUMNS,
    build_datasets,
    compare,
    prepare,
    replay_selected_set,
    run,
    write_compare,
    write_run,
)
from iterteach.learner import batch_objective
from iterteach.losses import LossKind

SMALL_GAUSS = DataSpec(source="gaussian", dimension=4, n_per_class=50)


def small_config(**overrides):
    base = dict(
        loss_kind=LossKind.LOGISTIC,
        lam=5e-5,
        eta=1e-3,
        iterations=40,
        seed=3,
        data=SMALL_GAUSS,
        teacher=TeacherSpec(kind="omniscient", strategy="pool"),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfig:
    def test_json_round_trip(self):
        cfg = small_config()
        again = ExperimentConfig.from_json_dict(cfg.to_json_dict())
        assert again == cfg

    def test_unknown_keys_rejected(self):
        raw = small_config().to_json_dict()
        raw["learning_rate"] = 0.1
        with pytest.raises(ConfigError, match="unknown config keys"):
            ExperimentConfig.from_json_dict(raw)

    def test_bad_values_rejected(self):
        with pytest.raises(ConfigError):
            small_config(eta=0.0)
        with pytest.raises(ConfigError):
            small_config(iterations=-1)
        with pytest.raises(ConfigError):
            small_config(teacher=TeacherSpec(kind="psychic"))
        with pytest.raises(ConfigError):
            small_config(data=DataSpec(source="file", path=None))

    def test_schema_version_checked(self):
        raw = small_config().to_json_dict()
        raw["schema_version"] = 99
        with pytest.raises(ConfigError, match="schema_version"):
            ExperimentConfig.from_json_dict(raw)


class TestRun:
    def test_row_count_is_iterations_plus_one(self):
        res = run(small_config())
        assert len(res.rows) == 41
        assert res.rows[0].t == 0
        assert res.rows[-1].t == 40

    def test_zero_iterations_single_row(self):
        res = run(small_config(iterations=0))
        assert len(res.rows) == 1
        assert res.rows[0].selected_index == -1

    def test_epsilon_stop_leaves_no_extra_rows(self):
        # A generous epsilon stops at row 0 or shortly after.
        res = run(small_config(epsilon=100.0))
        assert len(res.rows) == 1
        res2 = run(small_config(epsilon=1e-9))
        hits = [r.t for r in res2.rows if r.dist_to_wstar < 1e-9]
        if hits:
            assert res2.rows[-1].t == hits[0]

    def test_metrics_recomputable_from_weights(self):
        cfg = small_config()
        prep = prepare(cfg)
        res = run(cfg, prepared=prep)
        for t in (0, 7, 40):
            recomputed = batch_objective(prep.Xs, prep.ys, cfg.loss, res.weights[t])
            assert abs(recomputed - res.rows[t].train_objective) <= 1e-12
            dist = float(np.linalg.norm(res.weights[t] - res.w_star))
            assert abs(dist - res.rows[t].dist_to_wstar) <= 1e-12

    def test_distances_never_negative(self):
        res = run(small_config(teacher=TeacherSpec(kind="random")))
        assert all(r.dist_to_wstar >= 0 for r in res.rows)

    def test_batch_teacher_runs(self):
        res = run(small_config(teacher=TeacherSpec(kind="batch")))
        assert len(res.rows) == 41
        assert res.rows[1].selected_index == -1
        assert res.final.dist_to_wstar < res.rows[0].dist_to_wstar

    def test_synthesis_norm_bound_surfaces_iteration(self):
        # Logistic target on separated data has ||w*|| > 1.
        with pytest.raises(NormBoundError, match="iteration 1"):
            run(small_config(teacher=TeacherSpec(kind="omniscient", strategy="synthesis")))

    def test_synthesis_square_emits_certificate(self):
        cfg = small_config(
            loss_kind=LossKind.SQUARE,
            lam=0.0,
            eta=0.01,
            iterations=150,
            data=DataSpec(source="ball", dimension=3, n=40, radius=2.0),
            teacher=TeacherSpec(kind="omniscient", strategy="synthesis"),
        )
        res = run(cfg)
        assert res.certificate is not None
        assert res.certificate.valid
        # Contraction rate is 1 - eta * min(1/eta, 2 R_aug^2) = 0.9 here.
        assert res.certificate.rate == pytest.approx(0.9, abs=1e-12)
        assert res.final.dist_to_wstar < 1e-3

    def test_cross_space_surrogate_query_budget(self):
        cfg = small_config(
            iterations=10,
            teacher=TeacherSpec(kind="surrogate", space="cross"),
        )
        res = run(cfg)
        assert res.final_state.query_count == 10 * 100
        assert res.v_star is not None

    def test_imitation_query_budget_with_warm_start(self):
        cfg = small_config(
            iterations=10,
            teacher=TeacherSpec(kind="imitation", space="cross", warm_start=3),
        )
        res = run(cfg)
        # 3 warm-start probes plus one fit query per round.
        assert res.final_state.query_count == 3 + 10

    def test_cross_space_queries_see_student_outputs(self):
        # The teacher-space row must map back to the student's features, so
        # a query on teacher features returns exactly <w, student features>.
        from iterteach.harness import _ensure_teacher_space
        from iterteach.teachers import StudentQuery
        from iterteach.learner import LearnerState

        cfg = small_config(teacher=TeacherSpec(kind="surrogate", space="cross"))
        prep = prepare(cfg)
        _ensure_teacher_space(cfg, prep)
        M = prep.fmap.matrix
        d = M.shape[0]
        state = LearnerState(
            w=np.arange(1.0, d + 2.0), eta=1e-3, loss=cfg.loss
        )

        def to_student(Xt):
            return np.hstack([Xt[:, :d] @ M, Xt[:, d:]])

        query = StudentQuery(lambda: state, to_student)
        got = query.predict_many(prep.Xt[:20])
        want = prep.Xs[:20] @ state.w
        assert np.allclose(got, want, atol=1e-12)


class TestDeterminism:
    def test_identical_runs_byte_identical_files(self, tmp_path):
        cfg = small_config(teacher=TeacherSpec(kind="random"))
        a = write_run(run(cfg), tmp_path / "a")
        b = write_run(run(cfg), tmp_path / "b")
        for key in ("trace", "json", "weights"):
            assert a[key].read_bytes() == b[key].read_bytes(), key

    def test_trace_header(self, tmp_path):
        paths = write_run(run(small_config(iterations=2)), tmp_path)
        header = paths["trace"].read_text().splitlines()[0]
        assert header == ",".join(TRACE_COLUMNS)

    def test_different_seed_changes_trace(self, tmp_path):
        a = write_run(run(small_config(seed=1, teacher=TeacherSpec(kind="random"))), tmp_path / "a")
        b = write_run(run(small_config(seed=2, teacher=TeacherSpec(kind="random"))), tmp_path / "b")
        assert a["trace"].read_bytes() != b["trace"].read_bytes()


class TestReplay:
    def test_replay_stays_inside_selected_set(self):
        cfg = small_config(iterations=60)
        prep = prepare(cfg)
        res = run(cfg, prepared=prep)
        selected = {r.selected_index for r in res.rows if r.selected_index >= 0}
        rep = replay_selected_set(res, cfg, prepared=prep)
        replay_used = {r.selected_index for r in rep.rows if r.selected_index >= 0}
        assert replay_used <= selected
        assert len(rep.rows) == len(res.rows)

    def test_single_example_set_repeats_it(self):
        # A one-iteration run selects exactly one example.
        cfg = small_config(iterations=1)
        prep = prepare(cfg)
        res = run(cfg, prepared=prep)
        only = {r.selected_index for r in res.rows if r.selected_index >= 0}
        assert len(only) == 1
        rep_cfg = small_config(iterations=20)
        rep = replay_selected_set(res, rep_cfg, prepared=prepare(rep_cfg))
        used = [r.selected_index for r in rep.rows if r.selected_index >= 0]
        assert set(used) == only and len(used) == 20

    def test_synthesis_trace_cannot_replay(self):
        cfg = small_config(
            loss_kind=LossKind.SQUARE,
            lam=0.0,
            eta=0.01,
            iterations=5,
            data=DataSpec(source="ball", dimension=3, n=30, radius=2.0),
            teacher=TeacherSpec(kind="omniscient", strategy="synthesis"),
        )
        res = run(cfg)
        with pytest.raises(ValueError, match="no pool indices"):
            replay_selected_set(res, cfg)


class TestCompare:
    def test_self_compare_identical_columns(self, tmp_path):
        cfg = small_config(teacher=TeacherSpec(kind="random"))
        summary, results = compare([cfg, cfg], names=["a", "b"])
        assert len(summary) == 2
        assert summary[0].final_dist == summary[1].final_dist
        paths = write_compare(summary, results, tmp_path)
        rows = paths["csv"].read_text().splitlines()
        header = rows[0].split(",")
        ia = header.index("a_dist_to_wstar")
        ib = header.index("b_dist_to_wstar")
        for line in rows[1:]:
            cells = line.split(",")
            assert cells[ia] == cells[ib]

    def test_summary_row_count_matches_configs(self):
        cfgs = [
            small_config(teacher=TeacherSpec(kind="random")),
            small_config(teacher=TeacherSpec(kind="omniscient", strategy="pool")),
            small_config(teacher=TeacherSpec(kind="batch")),
        ]
        summary, _ = compare(cfgs)
        assert len(summary) == 3

    def test_mismatched_data_rejected(self):
        a = small_config()
        b = small_config(data=DataSpec(source="gaussian", dimension=5, n_per_class=50))
        with pytest.raises(ConfigError, match="data"):
            compare([a, b])

    def test_mismatched_seed_rejected(self):
        with pytest.raises(ConfigError, match="seed"):
            compare([small_config(seed=1), small_config(seed=2)])


class TestBuildDatasets:
    def test_gaussian_train_and_test_differ(self):
        train, test = build_datasets(small_config())
        assert train.n == test.n == 100
        assert not np.array_equal(train.X, test.X)

    def test_ball_test_shares_generating_model(self):
        cfg = small_config(
            loss_kind=LossKind.SQUARE,
            lam=0.0,
            data=DataSpec(source="ball", dimension=3, n=50, radius=1.0),
        )
        train, test = build_datasets(cfg)
        w = np.asarray(train.meta["w_true"])
        assert np.allclose(test.y, test.X @ w[:3] + w[3], atol=1e-12)

    def test_file_source_round_trip(self, tmp_path):
        from iterteach.data import Dataset, save_features

        path = tmp_path / "feats.csv"
        save_features(
            Dataset(np.array([[0.1, 0.2], [0.3, -0.4]]), np.array([1.0, -1.0]), {}),
            path,
        )
        cfg = small_config(data=DataSpec(source="file", path=str(path)))
        train, test = build_datasets(cfg)
        assert test is None
        assert train.n == 2


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg.to_json_dict(), indent=2))
    return path


class TestCli:
    def test_run_writes_artifacts(self, tmp_path, capsys):
        path = write_config(tmp_path, small_config(iterations=5))
        code = main(["run", "--config", str(path), "--out", str(tmp_path / "out")])
        assert code == 0
        assert (tmp_path / "out" / "run_trace.csv").exists()
        assert (tmp_path / "out" / "run.json").exists()
        assert (tmp_path / "out" / "run_weights.csv").exists()

    def test_quiet_suppresses_stdout(self, tmp_path, capsys):
        path = write_config(tmp_path, small_config(iterations=2))
        code = main(["run", "--config", str(path), "--out", str(tmp_path / "o"), "--quiet"])
        assert code == 0
        assert capsys.readouterr().out == ""

    def test_seed_override_changes_output(self, tmp_path):
        cfg = small_config(iterations=5, teacher=TeacherSpec(kind="random"))
        path = write_config(tmp_path, cfg)
        main(["run", "--config", str(path), "--out", str(tmp_path / "a")])
        main(["run", "--config", str(path), "--seed", "99", "--out", str(tmp_path / "b")])
        assert (tmp_path / "a" / "run_trace.csv").read_bytes() != (
            tmp_path / "b" / "run_trace.csv"
        ).read_bytes()

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["run", "--config", str(bad), "--out", str(tmp_path)]) == 2
        missing = tmp_path / "absent.json"
        assert main(["run", "--config", str(missing), "--out", str(tmp_path)]) == 2

    def test_teaching_error_exit_code(self, tmp_path):
        cfg = small_config(teacher=TeacherSpec(kind="omniscient", strategy="synthesis"))
        path = write_config(tmp_path, cfg)
        assert main(["run", "--config", str(path), "--out", str(tmp_path)]) == 3

    def test_certify_command(self, tmp_path, capsys):
        cfg = small_config(
            loss_kind=LossKind.SQUARE,
            lam=0.0,
            eta=0.01,
            iterations=50,
            data=DataSpec(source="ball", dimension=3, n=30, radius=2.0),
            teacher=TeacherSpec(kind="omniscient", strategy="synthesis"),
        )
        path = write_config(tmp_path, cfg)
        code = main(["certify", "--config", str(path), "--out", str(tmp_path / "c")])
        assert code == 0
        out = capsys.readouterr().out
        assert "valid=True" in out
        payload = json.loads((tmp_path / "c" / "certify.json").read_text())
        assert payload["certificate"]["valid"] is True

    def test_replay_command(self, tmp_path):
        path = write_config(tmp_path, small_config(iterations=20))
        code = main(["replay", "--config", str(path), "--out", str(tmp_path / "r")])
        assert code == 0
        assert (tmp_path / "r" / "replay_trace.csv").exists()

    def test_pool_volume_command(self, tmp_path, capsys):
        cfg = small_config(data=DataSpec(source="spherical", n=100))
        path = write_config(tmp_path, cfg)
        code = main(
            [
                "pool-volume",
                "--config",
                str(path),
                "--out",
                str(tmp_path / "v"),
                "--grid-points",
                "2048",
                "--refine-iters",
                "20",
            ]
        )
        assert code == 0
        payload = json.loads((tmp_path / "v" / "pool_volume.json").read_text())
        assert 0.0 < payload["value"] <= 1.0

    def test_compare_command(self, tmp_path):
        common = small_config(iterations=10).to_json_dict()
        raw = {
            "schema_version": 1,
            "common": common,
            "variants": [
                {"name": "omni", "teacher": {"kind": "omniscient", "strategy": "pool"}},
                {"name": "rand", "teacher": {"kind": "random"}},
            ],
        }
        path = tmp_path / "cmp.json"
        path.write_text(json.dumps(raw))
        code = main(["compare", "--config", str(path), "--out", str(tmp_path / "c"), "--quiet"])
        assert code == 0
        payload = json.loads((tmp_path / "c" / "compare.json").read_text())
        assert [s["name"] for s in payload["summary"]] == ["omni", "rand"]
