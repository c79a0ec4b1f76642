"""Declarative run configuration: base parameters, up to two swept axes, options."""
from __future__ import annotations

import copy
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ..errors import ConfigError, LgiNesError
from ..model import BathParams, Model, SystemParams

TASKS = ("steady", "lgi", "mlgi", "thermo")
FORMATS = ("csv", "json", "svg")

# physical parameters, also the CSV column names
PHYSICAL = ("statistics", "omega1", "omega2", "lam", "temp1", "temp2", "mu1", "mu2", "coupling")
# coordinates that resolve into the physical set
DERIVED = ("temp", "temp_mean", "temp_diff", "mu", "mu_mean", "mu_diff", "omega_bar", "omega_diff", "theta")
AXIS_NAMES = PHYSICAL[1:] + DERIVED + ("secular",)

DEFAULT_PARAMS = {
    "statistics": "bosonic",
    "omega1": 1.0,
    "omega2": 1.0,
    "lam": 1.0,
    "temp1": 1.0,
    "temp2": 1.0,
    "mu1": 0.0,
    "mu2": 0.0,
    "coupling": 0.005,
}

DEFAULT_OPTIONS = {
    "secular": False,
    "t_max": None,
    "grid_points": 512,
    "refine_tol": 1e-8,
    "t_points": 200,
}

MAX_AXES = 2


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple

    @classmethod
    def parse(cls, spec: dict, path: str) -> "Axis":
        if not isinstance(spec, dict):
            raise ConfigError("axis must be a mapping", path)
        name = spec.get("name")
        if name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis {name!r}; expected one of {', '.join(AXIS_NAMES)}", f"{path}.name")
        if "values" in spec:
            vals = spec["values"]
            if not isinstance(vals, list) or not vals:
                raise ConfigError("values must be a non-empty list", f"{path}.values")
            if name == "secular":
                return cls(name, tuple(bool(v) for v in vals))
            return cls(name, tuple(_number(v, f"{path}.values") for v in vals))
        for key in ("min", "max", "points"):
            if key not in spec:
                raise ConfigError("axis needs 'values' or min/max/points", f"{path}.{key}")
        lo, hi = _number(spec["min"], f"{path}.min"), _number(spec["max"], f"{path}.max")
        n = spec["points"]
        if not isinstance(n, int) or n < 1:
            raise ConfigError("points must be a positive integer", f"{path}.points")
        scale = spec.get("scale", "linear")
        if scale == "linear":
            vals = np.linspace(lo, hi, n)
        elif scale == "log":
            if lo <= 0 or hi <= 0:
                raise ConfigError("log axis needs positive bounds", f"{path}.min")
            vals = np.geomspace(lo, hi, n)
        else:
            raise ConfigError(f"scale must be linear or log, got {scale!r}", f"{path}.scale")
        return cls(name, tuple(float(v) for v in vals))


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"expected a number, got {v!r}", path)
    return float(v)


@dataclass(frozen=True)
class SweepConfig:
    task: str
    params: dict
    axes: tuple = ()
    options: dict = field(default_factory=lambda: dict(DEFAULT_OPTIONS))
    out: str | None = None
    format: str = "csv"

    def points(self):
        """Resolved parameter dicts in row-major order over the axes."""
        for combo in itertools.product(*(ax.values for ax in self.axes)):
            coords = {ax.name: v for ax, v in zip(self.axes, combo)}
            yield coords, resolve({**self.params, **coords})


def resolve(values: dict) -> dict:
    """Turn base parameters plus derived coordinates into the physical set."""
    v = dict(values)
    out = {k: v[k] for k in PHYSICAL if k in v}
    if "temp" in v:
        out["temp1"] = out["temp2"] = v["temp"]
    if "temp_mean" in v or "temp_diff" in v:
        tm = v.get("temp_mean", 0.5 * (out["temp1"] + out["temp2"]))
        dt = v.get("temp_diff", out["temp2"] - out["temp1"])
        out["temp1"], out["temp2"] = tm - dt / 2, tm + dt / 2
    if "mu" in v:
        out["mu1"] = out["mu2"] = v["mu"]
    if "mu_mean" in v or "mu_diff" in v:
        mm = v.get("mu_mean", 0.5 * (out["mu1"] + out["mu2"]))
        dm = v.get("mu_diff", out["mu2"] - out["mu1"])
        out["mu1"], out["mu2"] = mm - dm / 2, mm + dm / 2
    if "theta" in v or "omega_bar" in v or "omega_diff" in v:
        wb = v.get("omega_bar", 0.5 * (out["omega1"] + out["omega2"]))
        if "theta" in v:
            th = v["theta"]
            dw = 0.0 if math.isclose(th, -math.pi / 2, abs_tol=1e-15) else out["lam"] / math.tan(th)
        else:
            dw = v.get("omega_diff", out["omega1"] - out["omega2"])
        out["omega1"], out["omega2"] = wb + dw / 2, wb - dw / 2
    return out


def build_model(p: dict) -> Model:
    system = SystemParams(p["omega1"], p["omega2"], p["lam"])
    bath = BathParams(p["statistics"], p["temp1"], p["temp2"], p["mu1"], p["mu2"], p["coupling"])
    return Model.build(system, bath)


def parse_config(raw: dict, overrides: dict | None = None) -> SweepConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    raw = copy.deepcopy(raw)
    unknown = set(raw) - {"task", "params", "axes", "options", "output"}
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    overrides = overrides or {}

    task = overrides.get("task") or raw.get("task", "mlgi")
    if task not in TASKS:
        raise ConfigError(f"task must be one of {', '.join(TASKS)}, got {task!r}", "task")

    params = dict(DEFAULT_PARAMS)
    given = raw.get("params") or {}
    if not isinstance(given, dict):
        raise ConfigError("params must be a mapping", "params")
    for k, val in given.items():
        if k not in PHYSICAL and k not in DERIVED:
            raise ConfigError(f"unknown parameter {k!r}", f"params.{k}")
        params[k] = val if k == "statistics" else _number(val, f"params.{k}")
    if params["statistics"] not in ("bosonic", "fermionic"):
        raise ConfigError("statistics must be bosonic or fermionic", "params.statistics")

    axes_raw = raw.get("axes") or []
    if not isinstance(axes_raw, list):
        raise ConfigError("axes must be a list", "axes")
    if len(axes_raw) > MAX_AXES:
        raise ConfigError(f"at most {MAX_AXES} swept axes are allowed", "axes")
    axes = tuple(Axis.parse(a, f"axes[{i}]") for i, a in enumerate(axes_raw))
    if len({a.name for a in axes}) != len(axes):
        raise ConfigError("axis names must be distinct", "axes")

    options = dict(DEFAULT_OPTIONS)
    opts = raw.get("options") or {}
    if not isinstance(opts, dict):
        raise ConfigError("options must be a mapping", "options")
    for k, val in opts.items():
        if k not in DEFAULT_OPTIONS:
            raise ConfigError(f"unknown option {k!r}", f"options.{k}")
        options[k] = val
    for k in DEFAULT_OPTIONS:
        if overrides.get(k) is not None:
            options[k] = overrides[k]
    options["secular"] = bool(options["secular"])
    if options["t_max"] is not None and not _number(options["t_max"], "options.t_max") > 0:
        raise ConfigError("t_max must be positive", "options.t_max")
    for k in ("grid_points", "t_points"):
        if not isinstance(options[k], int) or options[k] < 2:
            raise ConfigError("must be an integer >= 2", f"options.{k}")

    output = raw.get("output") or {}
    out = overrides.get("out") or output.get("path")
    fmt = overrides.get("format") or output.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {', '.join(FORMATS)}", "output.format")

    cfg = SweepConfig(task, params, axes, options, out, fmt)
    preflight(cfg)
    return cfg


def preflight(cfg: SweepConfig):
    """Build every grid point's parameters so invalid ranges fail before any work."""
    for coords, p in cfg.points():
        try:
            build_model(p)
        except LgiNesError as exc:
            where = ", ".join(f"{k}={v}" for k, v in coords.items()) or "base parameters"
            raise ConfigError(f"invalid parameters at {where}: {exc}", "axes" if coords else "params") from exc


def read_config_file(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        raw = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    return raw


def load_config(path, overrides: dict | None = None) -> SweepConfig:
    return parse_config(read_config_file(path), overrides)
