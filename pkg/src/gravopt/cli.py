"""Command-line entry point.

Subcommands:
  benchmark         optimize an analytic test function
  tune              hyperparameter search from a TOML/JSON config file
  evaluate-metrics  classification report from a labels CSV

Every search writes a self-describing run directory (manifest.json,
history.csv, result.json) that is never overwritten; re-running with the
persisted config and seed reproduces result.json byte for byte.

Exit codes: 0 success, 1 runtime/objective failure, 2 usage or config
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import shutil
import sys
import time

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .errors import ConfigError, GravoptError, RunAbortedError
from .external import ExternalObjective
from .gsa import GsaConfig, RunResult, run
from .metrics import confusion, format_report, report, report_to_dict
from .objectives import (
    BENCHMARKS,
    FailurePolicy,
    benchmark_objective,
    benchmark_space,
    memoize,
)
from .space import CONTINUOUS, Dimension, SearchSpace, default_hyperparameter_space
from .toytrainer import ToyTrainerConfig, toy_trainer_objective

SEED_ENV_VAR = "GRAVOPT_SEED"
DEFAULT_SEED = 0

_GSA_KEYS = {
    "population": int,
    "iterations": int,
    "g0": float,
    "tau": float,
    "g_schedule": str,
    "beta": float,
    "t0_gravity": float,
    "kbest_final": int,
    "sense": str,
    "seed": int,
}

_TRAINER_KEYS = {
    "dataset_seed": int,
    "samples_per_class": int,
    "epochs": int,
    "patience": int,
    "lr0": float,
    "lr_drop": float,
    "lr_period": int,
    "validation_fraction": float,
}


def resolve_seed(flag_seed, config_seed) -> int:
    """CLI flag, then GRAVOPT_SEED, then config file, then the default."""
    if flag_seed is not None:
        return flag_seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR}={env!r} is not an integer") from None
    if config_seed is not None:
        return int(config_seed)
    return DEFAULT_SEED


def load_config(path: str) -> dict:
    try:
        if path.endswith(".json"):
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


def _coerce(section: str, raw: dict, schema: dict) -> dict:
    out = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} in [{section}]")
        try:
            out[key] = schema[key](value)
        except (TypeError, ValueError):
            raise ConfigError(f"[{section}] {key}={value!r} has the wrong type") from None
    return out


def space_from_config(cfg: dict) -> SearchSpace:
    spaces = cfg.get("space")
    if not spaces:
        return default_hyperparameter_space()
    dims = []
    for name, table in spaces.items():
        if not isinstance(table, dict):
            raise ConfigError(f"[space.{name}] must be a table")
        extra = set(table) - {"kind", "lower", "upper"}
        if extra:
            raise ConfigError(f"unknown keys {sorted(extra)} in [space.{name}]")
        try:
            dims.append(
                Dimension(
                    name,
                    str(table.get("kind", CONTINUOUS)),
                    float(table["lower"]),
                    float(table["upper"]),
                )
            )
        except KeyError as exc:
            raise ConfigError(f"[space.{name}] is missing {exc}") from None
    return SearchSpace(tuple(dims))


def gsa_config_from(cfg: dict, seed: int) -> GsaConfig:
    raw = _coerce("gsa", cfg.get("gsa", {}), _GSA_KEYS)
    raw.pop("seed", None)
    if "iterations" in raw:
        raw["max_iterations"] = raw.pop("iterations")
    return GsaConfig(seed=seed, **raw)


def objective_from(cfg: dict, sense: str, parallelism: int):
    table = dict(cfg.get("objective", {}))
    kind = table.pop("type", "toy-trainer")
    policy_kwargs = {}
    for key in ("retries", "penalty_margin", "penalty_default"):
        if key in table:
            policy_kwargs[key] = table.pop(key)
    if kind == "toy-trainer":
        trainer_kwargs = _coerce("objective", table, _TRAINER_KEYS)
        trainer = ToyTrainerConfig(**trainer_kwargs)
        return toy_trainer_objective(trainer), policy_kwargs, {"type": kind, **trainer_kwargs}
    if kind == "external":
        command = table.pop("command", None)
        timeout = float(table.pop("timeout", 30.0))
        if table:
            raise ConfigError(f"unknown keys {sorted(table)} in [objective]")
        if not command or not isinstance(command, list):
            raise ConfigError("[objective] type='external' needs command = [\"prog\", ...]")
        objective = ExternalObjective(
            [str(c) for c in command], timeout=timeout,
            parallelism=parallelism, sense=sense,
        )
        return objective, policy_kwargs, {"type": kind, "command": command, "timeout": timeout}
    raise ConfigError(f"[objective] type must be 'toy-trainer' or 'external', got {kind!r}")


def make_run_dir(base: str, command: str, seed: int) -> str:
    """Timestamped, seed-tagged directory; suffixed rather than reused."""
    os.makedirs(base, exist_ok=True)
    stamp = time.strftime("%Y%m%dT%H%M%SZ", time.gmtime())
    root = os.path.join(base, f"{command}-{stamp}-seed{seed}")
    path, k = root, 1
    while True:
        try:
            os.mkdir(path)
            return path
        except FileExistsError:
            k += 1
            path = f"{root}-{k}"


def write_history_csv(path: str, result: RunResult) -> None:
    if result.history:
        d = len(result.history[0].best_position)
    else:
        d = 0
    header = ["t", "g", "best_fitness", "worst_fitness", "kbest"]
    header += [f"best_position_{i}" for i in range(d)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in result.history:
            writer.writerow(
                [rec.t, rec.g, rec.best_fitness, rec.worst_fitness, rec.kbest]
                + list(rec.best_position)
            )


def write_result_json(path: str, result: RunResult, seed: int) -> None:
    doc = {
        "best_params": result.best_params.as_dict() if result.best_params else None,
        "best_fitness": result.best_fitness,
        "evaluations": result.evaluations,
        "seed": seed,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(path: str, *, command, seed, outcome, started, finished,
                   gsa_cfg: GsaConfig, space: SearchSpace, objective_spec: dict,
                   parallelism: int, result: RunResult = None) -> None:
    doc = {
        "command": command,
        "tool_version": __version__,
        "seed": seed,
        "outcome": outcome,
        "started_at": started,
        "finished_at": finished,
        "parallelism": parallelism,
        "config": {
            "gsa": {
                "population": gsa_cfg.population,
                "iterations": gsa_cfg.max_iterations,
                "g0": gsa_cfg.g0,
                "tau": gsa_cfg.tau,
                "g_schedule": gsa_cfg.g_schedule,
                "beta": gsa_cfg.beta,
                "t0_gravity": gsa_cfg.t0_gravity,
                "kbest_final": gsa_cfg.kbest_final,
                "sense": gsa_cfg.sense,
                "seed": seed,
            },
            "space": [
                {"name": d.name, "kind": d.kind, "lower": d.lower, "upper": d.upper}
                for d in space.dims
            ],
            "objective": objective_spec,
        },
        "best_fitness": result.best_fitness if result else None,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _utcnow() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _run_and_persist(args, command, space, objective, policy_kwargs, gsa_cfg,
                     objective_spec, config_snapshot_path=None) -> int:
    out_dir = make_run_dir(args.out_dir, command, gsa_cfg.seed)
    if config_snapshot_path:
        shutil.copy(config_snapshot_path, os.path.join(
            out_dir, "config" + os.path.splitext(config_snapshot_path)[1]))
    policy = FailurePolicy(strict=args.strict_failures, **policy_kwargs)
    memo = memoize(objective, policy)
    started = _utcnow()
    try:
        result = run(space, memo, gsa_cfg, parallelism=args.parallelism)
        outcome = "completed"
    except RunAbortedError as exc:
        result = exc.result
        outcome = "aborted"
        print(f"error: {exc}", file=sys.stderr)
    finally:
        if isinstance(objective, ExternalObjective):
            objective.close()
    finished = _utcnow()
    write_history_csv(os.path.join(out_dir, "history.csv"), result)
    if result.best_params is not None:
        write_result_json(os.path.join(out_dir, "result.json"), result, gsa_cfg.seed)
    write_manifest(
        os.path.join(out_dir, "manifest.json"),
        command=command, seed=gsa_cfg.seed, outcome=outcome,
        started=started, finished=finished, gsa_cfg=gsa_cfg, space=space,
        objective_spec=objective_spec, parallelism=args.parallelism,
        result=result if result.best_params is not None else None,
    )
    print(f"run directory: {out_dir}")
    if outcome == "completed":
        print(f"best fitness {result.best_fitness} after {result.evaluations} evaluations")
        print(f"best params  {result.best_params.as_dict()}")
        return 0
    return 1


def cmd_benchmark(args) -> int:
    overrides = {}
    if args.population is not None:
        overrides["population"] = args.population
    if args.iterations is not None:
        overrides["max_iterations"] = args.iterations
    if args.g0 is not None:
        overrides["g0"] = args.g0
    seed = resolve_seed(args.seed, None)
    gsa_cfg = GsaConfig(seed=seed, **overrides)
    space = benchmark_space(args.fn, args.dims, args.lower, args.upper)
    objective = benchmark_objective(args.fn)
    spec = {"type": "benchmark", "fn": args.fn, "dims": args.dims}
    return _run_and_persist(args, "benchmark", space, objective, {}, gsa_cfg, spec)


def cmd_tune(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    seed = resolve_seed(args.seed, cfg.get("gsa", {}).get("seed"))
    gsa_cfg = gsa_config_from(cfg, seed)
    space = space_from_config(cfg)
    objective, policy_kwargs, spec = objective_from(cfg, gsa_cfg.sense, args.parallelism)
    return _run_and_persist(args, "tune", space, objective, policy_kwargs,
                            gsa_cfg, spec, config_snapshot_path=args.config)


def read_labels_csv(path: str):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ConfigError(f"{path} is empty")
    header = [c.strip().lower() for c in rows[0]]
    if header != ["true_label", "predicted_label"]:
        raise ConfigError(
            f"{path} must start with header 'true_label,predicted_label', got {rows[0]}"
        )
    data = [r for r in rows[1:] if r]
    if not data:
        raise ConfigError(f"{path} has no data rows")
    if any(len(r) != 2 for r in data):
        raise ConfigError(f"{path} has rows without exactly two columns")
    y_true = [r[0].strip() for r in data]
    y_pred = [r[1].strip() for r in data]
    return y_true, y_pred


def cmd_evaluate_metrics(args) -> int:
    y_true, y_pred = read_labels_csv(args.csv)
    labels = set(y_true) | set(y_pred)
    positive = args.positive_label
    if positive is None:
        matches = [lab for lab in labels if lab.lower() == "positive"]
        if not matches:
            raise ConfigError(
                "no 'positive' label found; pass --positive-label"
            )
        positive = matches[0]
    try:
        cm = confusion(y_true, y_pred, positive)
        rep = report(cm)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    print(format_report(rep))
    out_path = args.json_out or os.path.splitext(args.csv)[0] + ".report.json"
    doc = report_to_dict(rep)
    doc["confusion_matrix"] = {"tp": cm.tp, "tn": cm.tn, "fp": cm.fp, "fn": cm.fn}
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"report written to {out_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravopt",
        description="Gravitational search optimization for bounded black-box problems.",
    )
    parser.add_argument("--version", action="version", version=f"gravopt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--seed", type=int, default=None,
                       help=f"random seed (overrides {SEED_ENV_VAR} and config)")
        p.add_argument("--parallelism", type=int, default=1,
                       help="concurrent objective evaluations per iteration")
        p.add_argument("--out-dir", default="runs", help="where run directories go")
        p.add_argument("--strict-failures", action="store_true",
                       help="abort the run when an evaluation fails past retries")

    p_bench = sub.add_parser("benchmark", help="optimize an analytic test function")
    p_bench.add_argument("--fn", required=True, choices=sorted(BENCHMARKS),
                         help="test function")
    p_bench.add_argument("--dims", type=int, default=3, help="space dimension")
    p_bench.add_argument("--lower", type=float, default=None, help="lower bound override")
    p_bench.add_argument("--upper", type=float, default=None, help="upper bound override")
    p_bench.add_argument("--population", type=int, default=None)
    p_bench.add_argument("--iterations", type=int, default=None)
    p_bench.add_argument("--g0", type=float, default=None)
    add_run_flags(p_bench)
    p_bench.set_defaults(func=cmd_benchmark)

    p_tune = sub.add_parser("tune", help="hyperparameter search from a config file")
    p_tune.add_argument("--config", default=None,
                        help="TOML or JSON run configuration (defaults apply if omitted)")
    add_run_flags(p_tune)
    p_tune.set_defaults(func=cmd_tune)

    p_metrics = sub.add_parser("evaluate-metrics",
                               help="classification report from a labels CSV")
    p_metrics.add_argument("csv", help="CSV with header true_label,predicted_label")
    p_metrics.add_argument("--positive-label", default=None,
                           help="label of the positive class (default: 'positive')")
    p_metrics.add_argument("--json-out", default=None,
                           help="where to write the JSON report")
    p_metrics.set_defaults(func=cmd_evaluate_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GravoptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
