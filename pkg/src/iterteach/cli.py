"""Command-line interface.

Subcommands:

* ``run``         execute one config, write trace/json/weights
* ``compare``     run the variants of a compare config, write summary
* ``replay``      re-run a config, then plain SGD on its selected set
* ``certify``     run a constructing teacher and verify its contraction
* ``pool-volume`` directional coverage of the config's candidate pool

Exit codes: 0 success, 2 configuration problems, 3 teaching-time
failures (span or norm-bound violations, numeric overflow).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exceptions import (
    ConfigError,
    DataFormatError,
    EmptyPoolError,
    NormBoundError,
    NumericOverflowError,
    SpanViolationError,
)
from .harness import (
    ExperimentConfig,
    SCHEMA_VERSION,
    build_datasets,
    compare,
    replay_selected_set,
    run,
    write_compare,
    write_run,
    _atomic_write_text,
)
from .teachers import Pool
from .theory import pool_volume
from .validation import augment_bias

_CONFIG_ERRORS = (ConfigError, DataFormatError)
_TEACHING_ERRORS = (
    SpanViolationError,
    NormBoundError,
    NumericOverflowError,
    EmptyPoolError,
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="path to a JSON config")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config)
    if args.seed is not None:
        raw = cfg.to_json_dict()
        raw["seed"] = int(args.seed)
        cfg = ExperimentConfig.from_json_dict(raw)
    return cfg


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    result = run(cfg)
    paths = write_run(result, args.out)
    _say(
        args,
        f"rows={len(result.rows)} final_dist={result.final.dist_to_wstar:.6g} "
        f"trace={paths['trace']}",
    )
    return 0


def _cmd_replay(args) -> int:
    cfg = _load_config(args)
    original = run(cfg)
    write_run(original, args.out, prefix="run")
    try:
        replay = replay_selected_set(original, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    paths = write_run(replay, args.out, prefix="replay")
    _say(
        args,
        f"replayed {len({r.selected_index for r in original.rows if r.selected_index >= 0})} "
        f"unique examples; final_dist={replay.final.dist_to_wstar:.6g} "
        f"trace={paths['trace']}",
    )
    return 0


def _cmd_certify(args) -> int:
    cfg = _load_config(args)
    if not (cfg.teacher.kind == "omniscient" and cfg.teacher.strategy in ("synthesis", "combination")):
        raise ConfigError(
            "certify needs an example-constructing teacher "
            "(omniscient synthesis or combination)"
        )
    result = run(cfg)
    write_run(result, args.out, prefix="certify")
    cert = result.certificate
    if cert is None:
        print("error: run produced no certificate (no teaching steps?)", file=sys.stderr)
        return 3
    _say(
        args,
        f"rate={cert.rate:.6g} nu={cert.nu:.6g} violations={len(cert.violations)} "
        f"valid={cert.valid}",
    )
    return 0


def _cmd_compare(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {args.config}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{args.config}: invalid JSON ({exc})") from None
    if not isinstance(raw, dict) or "variants" not in raw:
        raise ConfigError("compare config must contain 'common' and 'variants'")
    common = raw.get("common", {})
    if raw.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {raw.get('schema_version')!r}")
    configs, names = [], []
    for i, variant in enumerate(raw["variants"]):
        merged = json.loads(json.dumps(common))
        name = variant.pop("name", f"variant{i}")
        for key, value in variant.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = {**merged[key], **value}
            else:
                merged[key] = value
        if args.seed is not None:
            merged["seed"] = int(args.seed)
        configs.append(ExperimentConfig.from_json_dict(merged))
        names.append(str(name))
    summary, results = compare(configs, names)
    paths = write_compare(summary, results, args.out)
    for s in summary:
        _say(args, f"{s.name}: final_dist={s.final_dist:.6g} auc={s.auc_dist:.6g}")
    _say(args, f"summary={paths['json']}")
    return 0


def _cmd_pool_volume(args) -> int:
    cfg = _load_config(args)
    train, _ = build_datasets(cfg)
    pool = Pool.from_arrays(augment_bias(train.X), train.y, R=cfg.data.radius)
    report = pool_volume(
        pool, grid_points=args.grid_points, refine_iters=args.refine_iters, seed=cfg.seed
    )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "value": report.value,
        "method": report.method,
        "argmin_direction": [float(v) for v in report.argmin_direction],
    }
    _atomic_write_text(
        Path(args.out) / "pool_volume.json",
        json.dumps(payload, indent=2, sort_keys=True) + "\n",
    )
    _say(args, f"pool_volume={report.value:.6g} ({report.method})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iterteach",
        description="Teacher-guided SGD experiments for linear students",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one teaching run")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="run several teachers on shared data")
    _add_common(p_cmp)
    p_cmp.set_defaults(func=_cmd_compare)

    p_rep = sub.add_parser("replay", help="plain SGD on a run's selected set")
    _add_common(p_rep)
    p_rep.set_defaults(func=_cmd_replay)

    p_cert = sub.add_parser("certify", help="verify exponential contraction of a run")
    _add_common(p_cert)
    p_cert.set_defaults(func=_cmd_certify)

    p_vol = sub.add_parser("pool-volume", help="directional coverage of the pool")
    _add_common(p_vol)
    p_vol.add_argument("--grid-points", type=int, default=2**14)
    p_vol.add_argument("--refine-iters", type=int, default=100)
    p_vol.set_defaults(func=_cmd_pool_volume)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _TEACHING_ERRORS as exc:
        print(f"teaching error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
