"""Experiment orchestration: configs, teaching runs, traces, comparisons.

A run builds its datasets from the seed, batch-trains the target
optimum, then drives one teacher against one SGD student for the
configured number of rounds, recording per-iteration metrics.  All
randomness flows from the config seed through fixed named sub-streams,
so identical configs produce byte-identical output files.

Artifacts per run: a trace CSV (one row per iteration, plus row 0 for
the initial state), a JSON sidecar (config echo, target weights,
certificate when the teacher constructs examples), and the weight
trajectory CSV used by offline certification.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .data import (
    Dataset,
    gen_ball,
    gen_gaussian,
    gen_spherical,
    load_features,
    random_feature_map,
)
from .exceptions import ConfigError, IterTeachError, NumericOverflowError
from .learner import (
    LearnerState,
    batch_gradient,
    sgd_step,
    stationarity_gap,
    train_batch,
)
from .losses import LossKind, RegularizedLoss, value_many
from .rng import derive_rng, derive_seed
from .teachers import (
    BatchTeacher,
    CombinationTeacher,
    Decision,
    ImitationTeacher,
    OmniscientPoolTeacher,
    Pool,
    RandomBallTeacher,
    RandomPoolTeacher,
    RescalablePoolTeacher,
    StudentQuery,
    SurrogateTeacher,
    SynthesisTeacher,
)
from .theory import TeachabilityCertificate, certify_run
from .validation import augment_bias

SCHEMA_VERSION = 1

TRACE_COLUMNS = [
    "t",
    "train_objective",
    "dist_to_wstar",
    "test_accuracy",
    "selected_index",
    "selected_gamma",
    "objective_combined",
    "query_count",
]

TEACHER_KINDS = ("random", "batch", "omniscient", "surrogate", "imitation")
OMNISCIENT_STRATEGIES = ("pool", "synthesis", "combination", "rescalable_pool")
DATA_SOURCES = ("gaussian", "spherical", "ball", "file")


# ---------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class DataSpec:
    source: str = "gaussian"
    dimension: int = 10
    n_per_class: int = 1000
    mean_magnitude: float = 0.5
    n: int = 500
    radius: float | None = None
    path: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "source": self.source,
            "dimension": self.dimension,
            "n_per_class": self.n_per_class,
            "mean_magnitude": self.mean_magnitude,
            "n": self.n,
            "radius": self.radius,
            "path": self.path,
        }


@dataclass(frozen=True)
class TeacherSpec:
    kind: str = "omniscient"
    strategy: str = "pool"
    space: str = "same"
    source: str = "pool"  # random teacher: draw from the pool or the ball
    grid_size: int = 64
    warm_start: int = 0

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "strategy": self.strategy,
            "space": self.space,
            "source": self.source,
            "grid_size": self.grid_size,
            "warm_start": self.warm_start,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    loss_kind: LossKind = LossKind.LOGISTIC
    lam: float = 5e-5
    eta: float = 1e-4
    eta_v: float = 0.01
    iterations: int = 1000
    seed: int = 0
    epsilon: float = 1e-12
    data: DataSpec = field(default_factory=DataSpec)
    teacher: TeacherSpec = field(default_factory=TeacherSpec)

    def __post_init__(self):
        if self.eta <= 0:
            raise ConfigError(f"eta must be > 0, got {self.eta}")
        if self.eta_v <= 0:
            raise ConfigError(f"eta_v must be > 0, got {self.eta_v}")
        if self.iterations < 0:
            raise ConfigError(f"iterations must be >= 0, got {self.iterations}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}")
        if self.lam < 0:
            raise ConfigError(f"lambda must be >= 0, got {self.lam}")
        if self.data.source not in DATA_SOURCES:
            raise ConfigError(f"unknown data source {self.data.source!r}")
        if self.data.source == "file" and not self.data.path:
            raise ConfigError("file data source requires a path")
        if self.data.radius is not None and self.data.radius <= 0:
            raise ConfigError(f"radius must be > 0, got {self.data.radius}")
        t = self.teacher
        if t.kind not in TEACHER_KINDS:
            raise ConfigError(f"unknown teacher kind {t.kind!r}")
        if t.kind == "omniscient" and t.strategy not in OMNISCIENT_STRATEGIES:
            raise ConfigError(f"unknown omniscient strategy {t.strategy!r}")
        if t.space not in ("same", "cross"):
            raise ConfigError(f"teacher space must be 'same' or 'cross', got {t.space!r}")
        if t.kind == "random" and t.source not in ("pool", "ball"):
            raise ConfigError(f"random teacher source must be 'pool' or 'ball', got {t.source!r}")
        if t.grid_size < 2:
            raise ConfigError(f"grid_size must be >= 2, got {t.grid_size}")
        if t.warm_start < 0:
            raise ConfigError(f"warm_start must be >= 0, got {t.warm_start}")

    @property
    def loss(self) -> RegularizedLoss:
        return RegularizedLoss(self.loss_kind, self.lam)

    @property
    def cross_space(self) -> bool:
        return self.teacher.space == "cross" and self.teacher.kind in (
            "surrogate",
            "imitation",
        )

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "loss": {"kind": self.loss_kind.value, "lambda": self.lam},
            "eta": self.eta,
            "eta_v": self.eta_v,
            "iterations": self.iterations,
            "seed": self.seed,
            "epsilon": self.epsilon,
            "data": self.data.to_json_dict(),
            "teacher": self.teacher.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        version = raw.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version!r}")
        known = {
            "schema_version",
            "loss",
            "eta",
            "eta_v",
            "iterations",
            "seed",
            "epsilon",
            "data",
            "teacher",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        loss_raw = raw.get("loss", {})
        data_raw = dict(raw.get("data", {}))
        teacher_raw = dict(raw.get("teacher", {}))
        try:
            data = DataSpec(**data_raw)
        except TypeError as exc:
            raise ConfigError(f"bad data spec: {exc}") from None
        try:
            teacher = TeacherSpec(**teacher_raw)
        except TypeError as exc:
            raise ConfigError(f"bad teacher spec: {exc}") from None
        try:
            kind = LossKind.from_string(loss_raw.get("kind", "logistic"))
        except Exception as exc:
            raise ConfigError(str(exc)) from None
        return cls(
            loss_kind=kind,
            lam=float(loss_raw.get("lambda", 0.0)),
            eta=float(raw.get("eta", 1e-4)),
            eta_v=float(raw.get("eta_v", 0.01)),
            iterations=int(raw.get("iterations", 1000)),
            seed=int(raw.get("seed", 0)),
            epsilon=float(raw.get("epsilon", 1e-12)),
            data=data,
            teacher=teacher,
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_json_dict(raw)


# ---------------------------------------------------------------------------
# Trace rows and run results


@dataclass(frozen=True)
class TraceRow:
    t: int
    train_objective: float
    dist_to_wstar: float
    test_accuracy: float
    selected_index: int
    selected_gamma: float
    objective_combined: float
    query_count: int


@dataclass
class RunResult:
    config: ExperimentConfig
    rows: list[TraceRow]
    weights: np.ndarray
    w0: np.ndarray
    w_star: np.ndarray
    v_star: np.ndarray | None
    nu: float | None
    gamma0: float | None
    certificate: TeachabilityCertificate | None
    stationarity: float
    final_state: LearnerState

    @property
    def final(self) -> TraceRow:
        return self.rows[-1]


# ---------------------------------------------------------------------------
# Dataset assembly


def build_datasets(config: ExperimentConfig) -> tuple[Dataset, Dataset | None]:
    """Train and test datasets for a config (test is None for files)."""
    spec = config.data
    train_seed = derive_seed(config.seed, "train")
    test_seed = derive_seed(config.seed, "test")
    if spec.source == "gaussian":
        train = gen_gaussian(spec.dimension, spec.n_per_class, spec.mean_magnitude, train_seed)
        test = gen_gaussian(spec.dimension, spec.n_per_class, spec.mean_magnitude, test_seed)
    elif spec.source == "spherical":
        train = gen_spherical(spec.n, train_seed)
        test = gen_spherical(spec.n, test_seed)
    elif spec.source == "ball":
        radius = spec.radius if spec.radius is not None else 1.0
        train = gen_ball(spec.n, spec.dimension, radius, train_seed)
        test = gen_ball(
            spec.n,
            spec.dimension,
            radius,
            test_seed,
            w_true=np.asarray(train.meta["w_true"]),
        )
    elif spec.source == "file":
        domain = "binary" if config.loss_kind.is_classification else "real"
        train = load_features(spec.path, label_domain=domain)
        test = None
    else:  # pragma: no cover - rejected by config validation
        raise ConfigError(f"unknown data source {spec.source!r}")
    return train, test


def _sign(z: np.ndarray) -> np.ndarray:
    return np.where(z >= 0.0, 1.0, -1.0)


# ---------------------------------------------------------------------------
# The teaching loop


def teach(
    teacher,
    w0: np.ndarray,
    w_star: np.ndarray,
    loss: RegularizedLoss,
    eta: float,
    iterations: int,
    epsilon: float,
    Xs: np.ndarray,
    ys: np.ndarray,
    Xtest: np.ndarray | None = None,
    ytest: np.ndarray | None = None,
    state_holder: dict | None = None,
) -> tuple[list[TraceRow], np.ndarray, LearnerState]:
    """Drive one teacher against one student for ``iterations`` rounds.

    ``state_holder`` (when provided) is kept pointing at the live
    learner state so prediction-only query surfaces built around it
    observe every step; pass the same dict used to wire the teacher.
    """
    holder = state_holder if state_holder is not None else {}
    if "state" not in holder:
        holder["state"] = LearnerState(w=np.array(w0, dtype=np.float64), eta=eta, loss=loss)
    state = holder["state"]
    classification = loss.kind.is_classification
    Xs = np.ascontiguousarray(Xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)

    def metrics(dec: Decision | None, t: int) -> TraceRow:
        w = holder["state"].w
        obj = float(np.mean(value_many(loss.kind, Xs @ w, ys)))
        if loss.lam:
            obj += 0.5 * loss.lam * float(w @ w)
        dist = float(np.linalg.norm(w - w_star))
        if classification and Xtest is not None:
            acc = float(np.mean(_sign(Xtest @ w) == ytest))
        else:
            acc = float("nan")
        if dec is None:
            return TraceRow(t, obj, dist, acc, -1, float("nan"), float("nan"),
                            holder["state"].query_count)
        return TraceRow(
            t, obj, dist, acc, dec.index, dec.gamma, dec.objective,
            holder["state"].query_count,
        )

    rows = [metrics(None, 0)]
    weights = [holder["state"].w.copy()]
    if rows[0].dist_to_wstar < epsilon:
        return rows, np.asarray(weights), holder["state"]

    def get_w():
        return holder["state"].w

    for t in range(1, iterations + 1):
        try:
            dec = teacher.next_decision(get_w, w_star, loss, eta)
            state = holder["state"]
            if dec.batch:
                g = batch_gradient(Xs, ys, loss, state.w)
                w_next = state.w - eta * g
                if not np.all(np.isfinite(w_next)):
                    raise NumericOverflowError(
                        f"non-finite weights after batch step {state.t + 1}"
                    )
                state = replace(state, w=w_next, t=state.t + 1)
            else:
                x = dec.x if dec.x is not None else Xs[dec.index]
                state = sgd_step(state, x, dec.y)
        except IterTeachError as exc:
            raise type(exc)(f"iteration {t}: {exc}") from exc
        holder["state"] = state
        rows.append(metrics(dec, t))
        weights.append(state.w.copy())
        if rows[-1].dist_to_wstar < epsilon:
            break
    return rows, np.asarray(weights), holder["state"]


@dataclass
class PreparedRun:
    """Shared inputs of a run: datasets, targets, optional teacher space.

    Building this once and passing it to several ``run`` calls (as
    ``compare`` does) avoids re-training the same target optimum; it is
    only valid for configs sharing data spec, seed, loss and lambda.
    """

    train: Dataset
    test: Dataset | None
    Xs: np.ndarray
    ys: np.ndarray
    Xtest: np.ndarray | None
    ytest: np.ndarray | None
    w_star: np.ndarray
    stationarity: float
    fmap: object | None = None
    Xt: np.ndarray | None = None
    v_star: np.ndarray | None = None


def prepare(config: ExperimentConfig) -> PreparedRun:
    """Build datasets and batch-train the target optimum for a config."""
    train, test = build_datasets(config)
    Xs = augment_bias(train.X)
    ys = train.y
    Xtest = augment_bias(test.X) if test is not None else None
    ytest = test.y if test is not None else None
    loss = config.loss
    w_star = train_batch(Xs, ys, loss)
    gap = stationarity_gap(Xs, ys, loss, w_star)
    return PreparedRun(train, test, Xs, ys, Xtest, ytest, w_star, gap)


def _ensure_teacher_space(config: ExperimentConfig, prep: PreparedRun) -> None:
    if not config.cross_space or prep.Xt is not None:
        return
    prep.fmap = random_feature_map(prep.train.dimension, derive_rng(config.seed, "map"))
    prep.Xt = augment_bias(prep.train.X @ prep.fmap.matrix.T)
    prep.v_star = train_batch(prep.Xt, prep.ys, config.loss)


def _augmented_radius(radius: float | None) -> float | None:
    """Radius bound after the constant-1 bias coordinate is appended."""
    if radius is None:
        return None
    return float(np.sqrt(radius * radius + 1.0))


def _build_teacher(
    config: ExperimentConfig,
    Xs: np.ndarray,
    ys: np.ndarray,
    w_star: np.ndarray,
    v_star: np.ndarray | None,
    Xt: np.ndarray | None,
    fmap,
    holder: dict,
):
    spec = config.teacher
    rng_t = derive_rng(config.seed, "teacher")
    radius = config.data.radius
    pool_student = Pool.from_arrays(Xs, ys, R=_augmented_radius(radius))

    def make_query():
        if fmap is None:
            return StudentQuery(lambda: holder["state"])
        M = fmap.matrix
        d = M.shape[0]

        def to_student(X_teacher):
            return np.hstack([X_teacher[:, :d] @ M, X_teacher[:, d:]])

        return StudentQuery(lambda: holder["state"], to_student)

    if spec.kind == "random":
        if spec.source == "ball":
            if radius is None:
                raise ConfigError("random ball teacher requires data.radius")
            return RandomBallTeacher(radius, w_star, config.loss_kind, rng_t)
        return RandomPoolTeacher(pool_student, rng_t)
    if spec.kind == "batch":
        return BatchTeacher()
    if spec.kind == "omniscient":
        if spec.strategy == "pool":
            return OmniscientPoolTeacher(pool_student)
        if spec.strategy == "synthesis":
            return SynthesisTeacher(pool_student.R, config.loss_kind)
        if spec.strategy == "combination":
            return CombinationTeacher(pool_student)
        return RescalablePoolTeacher(pool_student, spec.grid_size)
    if spec.kind == "surrogate":
        if config.cross_space:
            pool_teacher = Pool.from_arrays(Xt, ys, R=_augmented_radius(radius))
            return SurrogateTeacher(pool_teacher, v_star, config.loss_kind, make_query())
        return SurrogateTeacher(pool_student, w_star, config.loss_kind, make_query())
    # imitation
    pool_teacher = (
        Pool.from_arrays(Xt, ys, R=_augmented_radius(radius)) if Xt is not None else pool_student
    )
    target = v_star if v_star is not None else w_star
    v0 = 0.1 * rng_t.standard_normal(pool_teacher.X.shape[1])
    return ImitationTeacher(
        pool_teacher,
        v0,
        target,
        config.eta_v,
        config.loss_kind,
        make_query(),
        rng_t,
        warm_start=spec.warm_start,
    )


def run(config: ExperimentConfig, prepared: PreparedRun | None = None) -> RunResult:
    """Execute one configured teaching run.

    ``prepared`` may carry the datasets and batch-trained targets of an
    earlier call with the same data spec, seed, loss and lambda.
    """
    prep = prepared if prepared is not None else prepare(config)
    _ensure_teacher_space(config, prep)
    Xs, ys = prep.Xs, prep.ys
    loss = config.loss

    w0 = 0.1 * derive_rng(config.seed, "init").standard_normal(Xs.shape[1])
    holder: dict = {
        "state": LearnerState(w=w0.copy(), eta=config.eta, loss=loss)
    }
    teacher = _build_teacher(
        config, Xs, ys, prep.w_star, prep.v_star, prep.Xt, prep.fmap, holder
    )
    rows, weights, state = teach(
        teacher,
        w0,
        prep.w_star,
        loss,
        config.eta,
        config.iterations,
        config.epsilon,
        Xs,
        ys,
        prep.Xtest,
        prep.ytest,
        state_holder=holder,
    )

    nu = getattr(teacher, "nu", None)
    gamma0 = None
    for row in rows[1:]:
        if np.isfinite(row.selected_gamma):
            gamma0 = float(row.selected_gamma)
            break
    certificate = None
    if config.teacher.kind == "omniscient" and config.teacher.strategy in (
        "synthesis",
        "combination",
    ):
        if nu is not None and weights.shape[0] >= 2 and config.eta * nu <= 1.0:
            certificate = certify_run(
                weights, prep.w_star, config.eta, nu, epsilon=config.epsilon, gamma=gamma0
            )
    return RunResult(
        config=config,
        rows=rows,
        weights=weights,
        w0=w0,
        w_star=prep.w_star,
        v_star=prep.v_star,
        nu=nu,
        gamma0=gamma0,
        certificate=certificate,
        stationarity=prep.stationarity,
        final_state=state,
    )


# ---------------------------------------------------------------------------
# Replay of the selected set


def replay_selected_set(
    result: RunResult,
    config: ExperimentConfig | None = None,
    prepared: PreparedRun | None = None,
) -> RunResult:
    """Plain SGD over the deduplicated set of pool indices a run selected.

    Uses the same data, initialization and learning rate as the original
    run, with a fresh derived seed for the uniform draws.
    """
    config = config if config is not None else result.config
    indices = sorted({row.selected_index for row in result.rows if row.selected_index >= 0})
    if not indices:
        raise ValueError(
            "trace has no pool indices; constructed-example runs cannot be replayed"
        )
    prep = prepared if prepared is not None else prepare(config)
    Xs, ys = prep.Xs, prep.ys
    loss = config.loss
    w0 = 0.1 * derive_rng(config.seed, "init").standard_normal(Xs.shape[1])

    subset = np.asarray(indices, dtype=int)
    pool = Pool.from_arrays(Xs[subset], ys[subset], R=_augmented_radius(config.data.radius))
    inner = RandomPoolTeacher(pool, derive_rng(config.seed, "replay"))

    class _Remapped:
        def next_decision(self, get_w, w_star, loss, eta):
            dec = inner.next_decision(get_w, w_star, loss, eta)
            return replace(dec, index=int(subset[dec.index]))

    rows, weights, state = teach(
        _Remapped(),
        w0,
        prep.w_star,
        loss,
        config.eta,
        config.iterations,
        config.epsilon,
        Xs,
        ys,
        prep.Xtest,
        prep.ytest,
    )
    return RunResult(
        config=config,
        rows=rows,
        weights=weights,
        w0=w0,
        w_star=prep.w_star,
        v_star=None,
        nu=None,
        gamma0=None,
        certificate=None,
        stationarity=prep.stationarity,
        final_state=state,
    )


# ---------------------------------------------------------------------------
# Comparison suites


@dataclass(frozen=True)
class CompareSummaryRow:
    name: str
    final_dist: float
    final_objective: float
    final_accuracy: float
    iterations_to_epsilon: int
    auc_dist: float


def _summary_row(name: str, result: RunResult) -> CompareSummaryRow:
    rows = result.rows
    hit = next((r.t for r in rows if r.dist_to_wstar < result.config.epsilon), -1)
    dists = np.array([r.dist_to_wstar for r in rows])
    return CompareSummaryRow(
        name=name,
        final_dist=rows[-1].dist_to_wstar,
        final_objective=rows[-1].train_objective,
        final_accuracy=rows[-1].test_accuracy,
        iterations_to_epsilon=hit,
        auc_dist=float(np.trapezoid(dists)),
    )


def compare(
    configs: list[ExperimentConfig], names: list[str] | None = None
) -> tuple[list[CompareSummaryRow], dict[str, RunResult]]:
    """Run several configs sharing data, seed and learning rate.

    Returns summary rows (one per config, in order) plus the named runs.
    """
    if not configs:
        raise ConfigError("compare needs at least one config")
    base = configs[0]
    for cfg in configs[1:]:
        if cfg.data != base.data:
            raise ConfigError("compare requires identical data specs")
        if cfg.seed != base.seed:
            raise ConfigError("compare requires a shared seed")
        if cfg.eta != base.eta:
            raise ConfigError("compare requires a shared learning rate")
    if names is None:
        names = []
        for i, cfg in enumerate(configs):
            t = cfg.teacher
            label = t.kind if t.kind != "omniscient" else f"omniscient_{t.strategy}"
            names.append(f"{i}_{label}")
    if len(names) != len(configs):
        raise ConfigError("names and configs must align")
    if len(set(names)) != len(names):
        raise ConfigError("compare names must be unique")
    results: dict[str, RunResult] = {}
    summary = []
    prepared_cache: dict[tuple, PreparedRun] = {}
    for name, cfg in zip(names, configs):
        key = (cfg.loss_kind, cfg.lam)
        if key not in prepared_cache:
            prepared_cache[key] = prepare(cfg)
        res = run(cfg, prepared=prepared_cache[key])
        results[name] = res
        summary.append(_summary_row(name, res))
    return summary, results


# ---------------------------------------------------------------------------
# Deterministic file output


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _atomic_write_text(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def trace_to_csv_text(rows: list[TraceRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for r in rows:
        writer.writerow(
            [
                r.t,
                _fmt(r.train_objective),
                _fmt(r.dist_to_wstar),
                _fmt(r.test_accuracy),
                r.selected_index,
                _fmt(r.selected_gamma),
                _fmt(r.objective_combined),
                r.query_count,
            ]
        )
    return buf.getvalue()


def weights_to_csv_text(weights: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    d = weights.shape[1]
    writer.writerow(["t"] + [f"w{i}" for i in range(d)])
    for t in range(weights.shape[0]):
        writer.writerow([t] + [_fmt(v) for v in weights[t]])
    return buf.getvalue()


def run_json_dict(result: RunResult) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": result.config.to_json_dict(),
        "w0": [float(v) for v in result.w0],
        "w_star": [float(v) for v in result.w_star],
        "v_star": None if result.v_star is None else [float(v) for v in result.v_star],
        "w_star_gradient_norm": result.stationarity,
        "nu": result.nu,
        "gamma0": result.gamma0,
        "rows": len(result.rows),
        "final_dist_to_wstar": result.final.dist_to_wstar,
        "final_train_objective": result.final.train_objective,
        "total_queries": result.final_state.query_count,
        "certificate": None
        if result.certificate is None
        else result.certificate.to_json_dict(),
    }


def write_run(result: RunResult, out_dir, prefix: str = "run") -> dict[str, Path]:
    """Write trace CSV, JSON sidecar and weight trajectory atomically."""
    out = Path(out_dir)
    paths = {
        "trace": out / f"{prefix}_trace.csv",
        "json": out / f"{prefix}.json",
        "weights": out / f"{prefix}_weights.csv",
    }
    _atomic_write_text(paths["trace"], trace_to_csv_text(result.rows))
    _atomic_write_text(
        paths["json"], json.dumps(run_json_dict(result), indent=2, sort_keys=True) + "\n"
    )
    _atomic_write_text(paths["weights"], weights_to_csv_text(result.weights))
    return paths


def write_compare(
    summary: list[CompareSummaryRow],
    results: dict[str, RunResult],
    out_dir,
    prefix: str = "compare",
) -> dict[str, Path]:
    """Aligned traces and a summary table, one CSV plus one JSON.

    Shorter runs (early epsilon stop) hold their final value in the
    aligned columns; the student stays where teaching left it.
    """
    out = Path(out_dir)
    names = [s.name for s in summary]
    length = max(len(results[n].rows) for n in names)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["t"]
    for n in names:
        header += [f"{n}_dist_to_wstar", f"{n}_train_objective", f"{n}_test_accuracy"]
    writer.writerow(header)
    for t in range(length):
        row = [t]
        for n in names:
            rows = results[n].rows
            r = rows[min(t, len(rows) - 1)]
            row += [_fmt(r.dist_to_wstar), _fmt(r.train_objective), _fmt(r.test_accuracy)]
        writer.writerow(row)

    summary_json = {
        "schema_version": SCHEMA_VERSION,
        "summary": [
            {
                "name": s.name,
                "final_dist": s.final_dist,
                "final_objective": s.final_objective,
                "final_accuracy": None if np.isnan(s.final_accuracy) else s.final_accuracy,
                "iterations_to_epsilon": s.iterations_to_epsilon,
                "auc_dist": s.auc_dist,
            }
            for s in summary
        ],
        "configs": {n: results[n].config.to_json_dict() for n in names},
    }
    paths = {
        "csv": out / f"{prefix}.csv",
        "json": out / f"{prefix}.json",
    }
    _atomic_write_text(paths["csv"], buf.getvalue())
    _atomic_write_text(
        paths["json"], json.dumps(summary_json, indent=2, sort_keys=True) + "\n"
    )
    return paths
