"""Evaluate a SweepConfig point by point and serialize the resulting table."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..dynamics import lgi_first_order, lgi_zeroth, regime_of
from ..errors import LgiNesError, RegimeMismatch
from ..liouvillian import POSITIVITY_TOL, build_block_generator
from ..lgi import correlation, default_t_max, lgi_functions, mlgi, qubit1_observable
from ..steadystate import steady_state_closed_form, steady_state_nullspace
from ..thermo import currents
from .config import PHYSICAL, SweepConfig, build_model

SCHEMA_LINE = "# lgi-nes schema v1"
THREADS_ENV = "LGI_NES_THREADS"

TASK_COLUMNS = {
    "steady": ("theta", "omega_gap", "rho11", "rho22", "rho33", "rho44", "re_rho23", "im_rho23", "pop23"),
    "mlgi": ("theta", "omega_gap", "pop23", "mlgi", "t_star", "omega_t_star", "attained_by", "violated",
             "trust_score", "current2", "sigma"),
    "thermo": ("theta", "omega_gap", "current1", "current2", "current2_closed", "sigma"),
    "lgi": ("t", "omega_t", "correlation", "i2", "iplus", "iminus", "iplus0", "iplus1", "trust_score"),
}
PRIMARY = {"steady": "pop23", "mlgi": "mlgi", "thermo": "current2", "lgi": "iplus"}
TAIL = ("secular", "min_eigenvalue", "positivity_ok", "error")


@dataclass
class Dataset:
    task: str
    axis_names: tuple
    columns: tuple
    rows: list
    axis_grid: tuple = ()

    def column(self, name) -> np.ndarray:
        return np.array([np.nan if r[name] == "" else r[name] for r in self.rows], dtype=float)

    def axis_values(self, axis) -> list:
        """Swept values of ``axis`` in sweep order."""
        return list(self.axis_grid[self.axis_names.index(axis)])

    def grid(self, name) -> np.ndarray:
        """Values of ``name`` reshaped to the axis grid (row-major)."""
        shape = [len(self.axis_values(a)) for a in self.axis_names]
        return self.column(name).reshape(shape)


def columns_for(cfg: SweepConfig) -> tuple:
    skip = set(PHYSICAL) | set(TASK_COLUMNS[cfg.task]) | {"secular"}
    axis_cols = tuple(a.name for a in cfg.axes if a.name not in skip)
    return axis_cols + PHYSICAL + TASK_COLUMNS[cfg.task] + TAIL


def _steady(model, gen):
    # closed form is exact for the non-secular generator; the secular one needs its own kernel
    return steady_state_nullspace(gen) if gen.secular else steady_state_closed_form(model)


def _point_rows(task, p, options):
    """Rows for one parameter point; raises on computation errors."""
    model = build_model(p)
    eb = model.eigenbasis
    gen = build_block_generator(model, secular=options["secular"])
    ss = _steady(model, gen)
    lo = ss.state.min_eigenvalue()
    base = {"theta": eb.theta, "omega_gap": eb.Omega}
    pops = ss.populations
    if task == "steady":
        row = dict(base, rho11=pops[0], rho22=pops[1], rho33=pops[2], rho44=pops[3],
                   re_rho23=ss.rho23.real, im_rho23=ss.rho23.imag, pop23=pops[1] + pops[2])
        return [(row, lo)]
    if task == "thermo":
        pair = currents(model, ss)
        tr = pair.dissipator_trace
        row = dict(base, current1=tr.I1, current2=tr.I2, current2_closed=pair.closed_form.I2, sigma=tr.sigma)
        return [(row, lo)]
    obs = qubit1_observable(eb)
    t_max = options["t_max"] or default_t_max(eb, model.system.omega_bar)
    if task == "mlgi":
        rep = mlgi(gen, obs, ss, t_max, options["grid_points"], options["refine_tol"])
        tr = currents(model, ss).dissipator_trace
        row = dict(base, pop23=pops[1] + pops[2], mlgi=rep.mlgi, t_star=rep.t_star,
                   omega_t_star=eb.Omega * rep.t_star, attained_by=rep.attained_by, violated=rep.violated,
                   trust_score=rep.t_star * model.trust_scale, current2=tr.I2, sigma=tr.sigma)
        return [(row, min(lo, rep.min_eigenvalue))]
    # lgi trace
    t = np.linspace(0.0, t_max, options["t_points"])
    vals = lgi_functions(gen, obs, ss, t)
    corr = correlation(gen, obs, ss.state, t)
    zeroth = lgi_zeroth(t, eb, ss)
    try:
        first = lgi_first_order(regime_of(model), t, model, ss)
    except RegimeMismatch:
        first = np.full_like(t, math.nan)
    rows = []
    for k in range(len(t)):
        rows.append((dict(t=t[k], omega_t=eb.Omega * t[k], correlation=corr[k], i2=vals.I2[k],
                          iplus=vals.Iplus[k], iminus=vals.Iminus[k], iplus0=zeroth.Iplus[k],
                          iplus1=first[k], trust_score=t[k] * model.trust_scale), lo))
    return rows


def _evaluate(job):
    task, coords, p, options, columns = job
    options = dict(options)
    if "secular" in coords:
        options["secular"] = coords["secular"]
    head = {**{k: v for k, v in coords.items() if k != "secular"}, **p}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            produced = _point_rows(task, p, options)
        out = []
        for row, lo in produced:
            full = dict(head, **row, secular=options["secular"], min_eigenvalue=lo,
                        positivity_ok=lo >= -POSITIVITY_TOL, error="")
            out.append(full)
        return out
    except (LgiNesError, np.linalg.LinAlgError, ValueError, ArithmeticError) as exc:
        blank = {c: "" for c in columns}
        blank.update(head, secular=options["secular"], positivity_ok=False, error=f"{type(exc).__name__}: {exc}")
        return [blank]


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    return max(1, int(threads))


def run_sweep(cfg: SweepConfig, threads: int | None = None) -> Dataset:
    """Evaluate every grid point. Row order is row-major over the axes and does
    not depend on the number of workers."""
    columns = columns_for(cfg)
    jobs = [(cfg.task, coords, p, cfg.options, columns) for coords, p in cfg.points()]
    n = resolve_threads(threads)
    if n == 1 or len(jobs) == 1:
        chunks = [_evaluate(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n) as pool:
            chunks = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * n))))
    rows = [{c: r.get(c, "") for c in columns} for chunk in chunks for r in chunk]
    return Dataset(cfg.task, tuple(a.name for a in cfg.axes), columns, rows, tuple(a.values for a in cfg.axes))


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def to_csv(ds: Dataset) -> str:
    buf = io.StringIO()
    buf.write(SCHEMA_LINE + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ds.columns)
    for r in ds.rows:
        w.writerow([_cell(r[c]) for c in ds.columns])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return None if math.isnan(v) else v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def to_json(ds: Dataset) -> str:
    doc = {
        "schema": SCHEMA_LINE.lstrip("# "),
        "task": ds.task,
        "axes": list(ds.axis_names),
        "columns": list(ds.columns),
        "rows": [[_json_value(r[c]) for c in ds.columns] for r in ds.rows],
    }
    return json.dumps(doc, indent=1)
