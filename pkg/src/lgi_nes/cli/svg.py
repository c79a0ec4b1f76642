"""Bare-bones SVG line plots and heatmaps with linear axes."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from ..errors import ConfigError

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=20, top=30, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _frame():
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    return x0, x1, y0, y1


def _scale(v, lo, hi, a, b):
    if hi == lo:
        return 0.5 * (a + b)
    return a + (v - lo) * (b - a) / (hi - lo)


def _axes(parts, xlim, ylim, xlabel, ylabel, title):
    x0, x1, y0, y1 = _frame()
    parts.append(f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" fill="none" stroke="black"/>')
    for v in np.linspace(*xlim, 5):
        x = _scale(v, *xlim, x0, x1)
        parts.append(f'<text x="{x:.1f}" y="{y0 + 18}" font-size="11" text-anchor="middle">{v:.3g}</text>')
    for v in np.linspace(*ylim, 5):
        y = _scale(v, *ylim, y0, y1)
        parts.append(f'<text x="{x0 - 6}" y="{y + 4:.1f}" font-size="11" text-anchor="end">{v:.3g}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 10}" font-size="13" '
                 f'text-anchor="middle">{escape(xlabel)}</text>')
    parts.append(f'<text x="16" y="{(y0 + y1) / 2}" font-size="13" text-anchor="middle" '
                 f'transform="rotate(-90 16 {(y0 + y1) / 2})">{escape(ylabel)}</text>')
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="18" font-size="14" text-anchor="middle">{escape(title)}</text>')


def _doc(parts):
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">'
    return "\n".join([head, *parts, "</svg>"]) + "\n"


def _limits(arrs):
    vals = np.concatenate([np.asarray(a, float).ravel() for a in arrs])
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        return 0.0, 1.0
    return float(vals.min()), float(vals.max())


def line_plot(x, series: dict, xlabel="", ylabel="", title="", hlines=()) -> str:
    """``series`` maps a legend label to y values sampled at ``x``."""
    x = np.asarray(x, float)
    xlim = _limits([x])
    ylim = _limits(list(series.values()) + [np.asarray(hlines, float)])
    parts = []
    _axes(parts, xlim, ylim, xlabel, ylabel, title)
    x0, x1, y0, y1 = _frame()
    for h in hlines:
        y = _scale(h, *ylim, y0, y1)
        parts.append(f'<line x1="{x0}" y1="{y:.1f}" x2="{x1}" y2="{y:.1f}" stroke="red" stroke-dasharray="4 3"/>')
    for i, (label, y) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        pts = [f"{_scale(a, *xlim, x0, x1):.2f},{_scale(b, *ylim, y0, y1):.2f}"
               for a, b in zip(x, np.asarray(y, float)) if np.isfinite(b)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(pts)}"/>')
        parts.append(f'<text x="{x1 - 8}" y="{y1 + 16 + 14 * i}" font-size="11" fill="{color}" '
                     f'text-anchor="end">{escape(str(label))}</text>')
    return _doc(parts)


def _color(f):
    # white to dark red
    f = min(max(f, 0.0), 1.0)
    r = 255 - int(80 * f)
    gb = 255 - int(235 * f)
    return f"#{r:02x}{gb:02x}{gb:02x}"


def heatmap(x, y, z, xlabel="", ylabel="", title="") -> str:
    """``z`` has shape (len(x), len(y)); NaN cells are drawn grey."""
    x, y, z = np.asarray(x, float), np.asarray(y, float), np.asarray(z, float)
    xlim, ylim = _limits([x]), _limits([y])
    zlo, zhi = _limits([z])
    parts = []
    x0, x1, y0, y1 = _frame()
    cw = (x1 - x0) / len(x)
    ch = (y0 - y1) / len(y)
    for i in range(len(x)):
        for j in range(len(y)):
            v = z[i, j]
            fill = "#cccccc" if not np.isfinite(v) else _color(_scale(v, zlo, zhi, 0.0, 1.0))
            parts.append(f'<rect x="{x0 + i * cw:.2f}" y="{y0 - (j + 1) * ch:.2f}" width="{cw:.2f}" '
                         f'height="{ch:.2f}" fill="{fill}"/>')
    _axes(parts, xlim, ylim, xlabel, ylabel, f"{title} [{zlo:.3g}, {zhi:.3g}]".strip())
    return _doc(parts)


def dataset_svg(ds, value: str) -> str:
    """Plot a Dataset: traces for LGI runs, lines for one axis, heatmap for two."""
    if ds.task == "lgi":
        t = ds.column("omega_t")
        series = {"I+": ds.column("iplus"), "I-": ds.column("iminus"), "I2/2": 0.5 * ds.column("i2")}
        return line_plot(t, series, "Omega t", "LGI functions", hlines=(1.0,))
    if len(ds.axis_names) == 1:
        ax = ds.axis_names[0]
        xs = [float(v) for v in ds.axis_values(ax)]
        return line_plot(xs, {value: ds.column(value)}, ax, value)
    if len(ds.axis_names) == 2:
        ax, ay = ds.axis_names
        xs, ys = ds.axis_values(ax), ds.axis_values(ay)
        z = ds.grid(value)
        if len(xs) <= 6 or len(ys) <= 6:
            # few curves read better than a coarse heatmap
            if len(xs) <= len(ys):
                few, fv, many, mv, curves = ax, xs, ay, ys, z
            else:
                few, fv, many, mv, curves = ay, ys, ax, xs, z.T
            series = {f"{few}={v:g}": c for v, c in zip(fv, curves)}
            return line_plot([float(v) for v in mv], series, many, value)
        return heatmap([float(v) for v in xs], [float(v) for v in ys], z, ax, ay, value)
    raise ConfigError("svg output needs one or two swept axes", "output.format")
