"""Command-line entry point."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from ..errors import ConfigError, LgiNesError
from .config import DERIVED, PHYSICAL, TASKS, parse_config, read_config_file
from .figures import RECIPES, evaluate_checks
from .svg import dataset_svg
from .sweep import PRIMARY, run_sweep, to_csv, to_json
from .validate import run_validation

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2, 3


def _common(p, configurable=True):
    if configurable:
        p.add_argument("--config", help="YAML run configuration")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a base parameter, e.g. --set lam=0.8 --set statistics=fermionic")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json", "svg"))
    p.add_argument("--threads", type=int, help="worker processes (default: $LGI_NES_THREADS or 1)")
    p.add_argument("--secular", action="store_true", default=None, help="drop population-coherence couplings")
    p.add_argument("--t-max", type=float, dest="t_max")
    p.add_argument("--grid-points", type=int, dest="grid_points")
    p.add_argument("--t-points", type=int, dest="t_points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lgi-nes", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for task in TASKS:
        _common(sub.add_parser(task, help=f"run the {task} task"))
    _common(sub.add_parser("sweep", help="run the task named in --config"))
    fig = sub.add_parser("figure", help="run a named figure recipe and check its shape")
    fig.add_argument("name", nargs="?", help="recipe name, e.g. fig5a")
    fig.add_argument("--list", action="store_true", help="list recipes")
    _common(fig, configurable=False)
    val = sub.add_parser("validate", help="run the cross-check suite")
    val.add_argument("--samples", type=int, default=200)
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--no-perturbative", action="store_true")
    return parser


def _parse_sets(items) -> dict:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigError(f"expected KEY=VALUE, got {item!r}", "--set")
        if key not in PHYSICAL and key not in DERIVED:
            raise ConfigError(f"unknown parameter {key!r}", f"--set {key}")
        if key == "statistics":
            out[key] = val
        else:
            try:
                out[key] = float(val)
            except ValueError:
                raise ConfigError(f"expected a number, got {val!r}", f"--set {key}") from None
    return out


def _overrides(args, task=None) -> dict:
    keys = ("out", "format", "secular", "t_max", "grid_points", "t_points")
    ov = {k: getattr(args, k) for k in keys}
    ov["task"] = task
    return ov


def _config_for(args, task):
    raw = read_config_file(args.config) if args.config else {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    sets = _parse_sets(args.set)
    if sets:
        raw["params"] = {**(raw.get("params") or {}), **sets}
    return parse_config(raw, _overrides(args, task))


def _render(ds, fmt, value) -> str:
    if fmt == "json":
        return to_json(ds)
    if fmt == "svg":
        return dataset_svg(ds, value)
    return to_csv(ds)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run_task(args, task):
    cfg = _config_for(args, task)
    ds = run_sweep(cfg, args.threads)
    _emit(_render(ds, cfg.format, PRIMARY[cfg.task]), cfg.out)
    errors = [r["error"] for r in ds.rows if r["error"]]
    if errors and len(errors) == len(ds.rows):
        print(f"error: {errors[0]}", file=sys.stderr)
        return EXIT_RUNTIME
    if errors:
        print(f"warning: {len(errors)} of {len(ds.rows)} rows failed; see the error column", file=sys.stderr)
    return EXIT_OK


def _run_figure(args):
    if args.list or not args.name:
        for name, rec in RECIPES.items():
            print(f"{name}\t{rec.caption}")
        return EXIT_OK
    rec = RECIPES.get(args.name)
    if rec is None:
        raise ConfigError(f"unknown figure {args.name!r}; try --list", "name")
    cfg = rec.config(_overrides(args))
    ds = run_sweep(cfg, args.threads)
    _emit(_render(ds, cfg.format, rec.value), cfg.out)
    results = evaluate_checks(rec, ds)
    for desc, ok in results:
        print(f"{'PASS' if ok else 'FAIL'} {rec.name}: {desc}", file=sys.stderr)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_VALIDATION


def _run_validate(args):
    report = run_validation(samples=args.samples, seed=args.seed, perturbative=not args.no_perturbative)
    print(report.format())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _run_validate(args)
        if args.command == "figure":
            return _run_figure(args)
        if args.command == "sweep":
            if not args.config:
                raise ConfigError("sweep needs --config", "--config")
            return _run_task(args, None)
        return _run_task(args, args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LgiNesError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
