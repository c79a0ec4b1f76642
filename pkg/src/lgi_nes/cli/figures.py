"""Named sweep recipes with qualitative shape assertions for each figure."""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import SweepConfig, parse_config

SLACK = 1e-9
HALF_PI = math.pi / 2


@dataclass(frozen=True)
class Check:
    description: str
    test: Callable


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    caption: str
    raw: dict
    value: str
    checks: tuple

    def config(self, overrides: dict | None = None) -> SweepConfig:
        return parse_config(copy.deepcopy(self.raw), overrides)


def _cfg(task, params, axes=(), **options):
    base = {"omega1": 1.0, "omega2": 1.0, "lam": 1.0, "coupling": 0.005}
    base.update(params)
    return {"task": task, "params": base, "axes": list(axes), "options": options}


def _lin(name, lo, hi, n):
    return {"name": name, "min": lo, "max": hi, "points": n}


def _vals(name, values):
    return {"name": name, "values": list(values)}


def _strictly_increasing(y):
    return bool(np.all(np.diff(y) > 0))


def _window(ds, lo, hi):
    wt = ds.column("omega_t")
    return (wt > lo) & (wt <= hi)


# ----- checks reused across panels -----

def _iplus_violates(ds):
    sel = _window(ds, 0.0, HALF_PI)
    return bool(np.any(ds.column("iplus")[sel] > 1 + SLACK))


def _iminus_bounded(ds):
    sel = _window(ds, 0.0, 2 * math.pi)
    return bool(np.all(ds.column("iminus")[sel] <= 1 + SLACK))


def _i2_bounded(ds):
    sel = _window(ds, 0.0, 2 * math.pi)
    return bool(np.all(0.5 * ds.column("i2")[sel] <= 1 + SLACK))


LGI_TRACE_CHECKS = (
    Check("I+ exceeds 1 for some Omega t in (0, pi/2)", _iplus_violates),
    Check("I- never exceeds 1 on (0, 2 pi / Omega]", _iminus_bounded),
    Check("I2/2 never exceeds 1 on (0, 2 pi / Omega]", _i2_bounded),
)


def _overlay_close(ds):
    sel = _window(ds, 0.0, 2 * math.pi / 3)
    res = ds.column("iplus") - ds.column("iplus0") - ds.column("iplus1")
    return bool(np.max(np.abs(res[sel])) <= 0.02)


def _overlay_improves(ds):
    sel = _window(ds, 0.0, math.pi)
    ip = ds.column("iplus")[sel]
    r0 = np.abs(ip - ds.column("iplus0")[sel])
    r1 = np.abs(ip - ds.column("iplus0")[sel] - ds.column("iplus1")[sel])
    return bool(r1.mean() < r0.mean())


OVERLAY_CHECKS = (
    Check("zeroth plus first order stays within 0.02 of I+ for Omega t <= 2 pi/3", _overlay_close),
    Check("first-order term reduces the mean deviation on (0, pi/Omega]", _overlay_improves),
)


def _single_interior_max(y):
    k = int(np.argmax(y))
    if k == 0 or k == len(y) - 1:
        return False
    peaks = [i for i in range(1, len(y) - 1) if y[i] > y[i - 1] and y[i] >= y[i + 1]]
    return len(peaks) == 1


def _decreasing_in_first_axis(ds):
    z = ds.grid("mlgi")
    return bool(np.all(np.diff(z, axis=0) < 0))


def _non_increasing_in_first_axis(ds):
    z = ds.grid("mlgi")
    return bool(np.all(np.diff(z, axis=0) <= SLACK))


def _ordered_by_first_axis(value, skip_first=True):
    # rows of the grid are ordered by increasing first-axis value (e.g. lam)
    def test(ds):
        z = ds.grid(value)
        z = z[:, 1:] if skip_first else z
        return bool(np.all(np.diff(z, axis=0) > 0))
    return test


def _monotone_rows(value):
    def test(ds):
        return all(_strictly_increasing(row) for row in ds.grid(value))
    return test


def _fig5a_hump(ds):
    return _single_interior_max(ds.grid("mlgi")[0])


def _fig5b_resonance(ds):
    mus = np.array(ds.axis_values("mu"))
    z = ds.grid("mlgi")
    return all(abs(mus[int(np.argmax(row))] - 1.0) < 1e-12 for row in z)


def _fig6_theta_peak(ds):
    th = np.array(ds.axis_values("theta"))
    z = ds.grid("mlgi")
    return all(abs(th[int(np.argmax(row))] + HALF_PI) <= 0.25 for row in z)


def _fig6_grows_with_gap(ds):
    th = np.array(ds.axis_values("theta"))
    col = ds.grid("mlgi")[:, int(np.argmin(np.abs(th + HALF_PI)))]
    return _strictly_increasing(col)


def _fig6_resonant_gap(ds):
    wb = np.array(ds.axis_values("omega_bar"))
    z = ds.grid("mlgi")
    k = int(np.argmin(np.abs(wb - 2.5)))
    return bool(np.all(z[k] > z[0]))


def _ordered_where(value, axis, lo, hi):
    # lam ordering restricted to lo <= axis value - first value <= hi
    def test(ds):
        x = np.array(ds.axis_values(axis), float)
        bias = x - x[0]
        sel = (bias > 0) & (bias >= lo) & (bias <= hi)
        z = ds.grid(value)[:, sel]
        return bool(sel.any() and np.all(np.diff(z, axis=0) > 0))
    return test


def _first_rows_ordered(value):
    # row 0 below row 1 at every nonzero bias
    def test(ds):
        z = ds.grid(value)[:, 1:]
        return bool(np.all(z[0] < z[1]))
    return test


def _bounded_by_coupling(ds):
    return bool(np.all(np.abs(ds.column("current2")) <= ds.column("coupling") + SLACK))


def _saturates(ds):
    z = ds.grid("current2")
    return bool(np.all(np.abs(z[:, -1] - z[:, -2]) <= 1e-3 * np.abs(z[:, -1])))


def _non_decreasing_rows(value):
    def test(ds):
        return all(np.all(np.diff(row) >= -SLACK) for row in ds.grid(value))
    return test


def _sigma_linear_tail(ds):
    mu2 = np.array(ds.axis_values("mu2"))
    sel = (mu2 >= 5) & (mu2 <= 10)
    for row in ds.grid("sigma"):
        x, y = mu2[sel], row[sel]
        fit = np.polyval(np.polyfit(x, y, 1), x)
        if np.max(np.abs(y - fit)) > 0.01 * (y.max() - y.min()):
            return False
    return True


def _forward_bias_wins(axis_mean, diff_axis, means):
    # MLGI at +d exceeds MLGI at -d for every d > 0, on the listed mean values
    def test(ds):
        tm = np.array(ds.axis_values(axis_mean))
        d = np.array(ds.axis_values(diff_axis))
        z = ds.grid("mlgi")
        for m in means:
            row = z[int(np.argmin(np.abs(tm - m)))]
            for k in np.nonzero(d > 0)[0]:
                j = int(np.argmin(np.abs(d + d[k])))
                if not row[k] > row[j]:
                    return False
        return True
    return test


def _fig9b_resonance(ds):
    mm = np.array(ds.axis_values("mu_mean"))
    dm = np.array(ds.axis_values("mu_diff"))
    z = ds.grid("mlgi")
    res = z[int(np.argmin(np.abs(mm - 1.0)))]
    low = z[int(np.argmin(np.abs(mm - 0.4)))]
    zero = int(np.argmin(np.abs(dm)))
    side = [int(np.argmin(np.abs(dm - s))) for s in (-1.2, 1.2)]
    return int(np.argmax(res)) == zero and all(low[k] > low[zero] for k in side)


def _fig10_checks():
    def rows(ds):
        sec = ds.axis_values("secular")
        z = ds.grid("mlgi")
        return z[sec.index(False)], z[sec.index(True)]

    def secular_symmetric(ds):
        _, lind = rows(ds)
        return bool(np.max(np.abs(lind - lind[::-1])) <= SLACK)

    def redfield_asymmetric(ds):
        br, _ = rows(ds)
        return bool(br[-1] > br[0] + SLACK)

    def coincide_at_zero(ds):
        br, lind = rows(ds)
        k = int(np.argmin(np.abs(np.array(ds.axis_values("temp_diff")))))
        return bool(abs(br[k] - lind[k]) <= SLACK)

    return (
        Check("secular MLGI symmetric under temp_diff -> -temp_diff (1e-9)", secular_symmetric),
        Check("Bloch-Redfield MLGI larger at the largest positive temp_diff", redfield_asymmetric),
        Check("both generators agree at temp_diff = 0 (1e-9)", coincide_at_zero),
    )


def _enhanced_by_bias(ds):
    z = ds.grid("mlgi")
    return bool(np.all(z[:, 1:].max(axis=1) > z[:, 0]))


def _peak_then_fade(ds):
    z = ds.grid("mlgi")
    return bool(np.all(z[:, -1] < z.max(axis=1)))


def _peak_ordered_by_lam(ds):
    return _strictly_increasing(ds.grid("mlgi").max(axis=1))


def _max_at_zero_bias(ds):
    z = ds.grid("mlgi")
    return bool(np.all(np.argmax(z, axis=1) == 0))


def _detuned_grid(ds, diff_axis):
    th = np.array(ds.axis_values("theta"), float)
    d = np.array(ds.axis_values(diff_axis), float)
    return th, d, ds.grid("mlgi")


def _swap_symmetric_population(ds):
    # exchanging the qubits maps (theta, bias) to (-pi - theta, -bias)
    z = ds.grid("pop23")
    return bool(np.max(np.abs(z - z[::-1, ::-1])) <= 1e-9)


def _cold_side_detuning_wins(diff_axis, bias):
    # at +bias the best theta has the bath-2 qubit softer (theta < -pi/2), and
    # the mirror image at -bias
    def test(ds):
        th, d, z = _detuned_grid(ds, diff_axis)
        kp = int(np.argmin(np.abs(d - bias)))
        km = int(np.argmin(np.abs(d + bias)))
        return bool(th[np.argmax(z[:, kp])] < -HALF_PI and th[np.argmax(z[:, km])] > -HALF_PI)
    return test


def _resonant_column_best(ds):
    th, d, z = _detuned_grid(ds, ds.axis_names[1])
    i = int(np.argmin(np.abs(th + HALF_PI)))
    return bool(np.all(np.argmax(z, axis=0) == i))


def _forward_bias_every_theta(ds):
    return bool(np.all(np.diff(ds.grid("mlgi"), axis=1) > 0))


def _global_max_at_resonance(ds):
    th, d, z = _detuned_grid(ds, "mu_diff")
    i, k = np.unravel_index(int(np.argmax(z)), z.shape)
    return abs(th[i] + HALF_PI) < 1e-12 and abs(d[k]) < 1e-12


def _in_range(ds):
    y = ds.column("mlgi")
    y = y[np.isfinite(y)]
    return bool(y.size and np.all(y >= -SLACK) and np.all(y <= 0.5 + SLACK))


def _recipes():
    theta_axis = _lin("theta", -HALF_PI - 0.6, -HALF_PI + 0.6, 7)
    gap_axis = _lin("omega_bar", 1.2, 3.0, 4)
    lams = _vals("lam", [0.4, 0.7, 1.0])
    trace = dict(t_max=2 * math.pi, t_points=401)
    r = []

    r.append(FigureRecipe("fig3a", "LGI functions, bosonic equilibrium, T=1.5",
                          _cfg("lgi", {"statistics": "bosonic", "temp": 1.5}, **trace), "iplus", LGI_TRACE_CHECKS))
    r.append(FigureRecipe("fig3b", "LGI functions, fermionic equilibrium, T=1.5, mu=1",
                          _cfg("lgi", {"statistics": "fermionic", "temp": 1.5, "mu": 1.0}, **trace),
                          "iplus", LGI_TRACE_CHECKS))
    half = dict(t_max=math.pi, t_points=301)
    r.append(FigureRecipe("fig4a", "I+ against its zeroth and first order forms, bosonic, T=1.5",
                          _cfg("lgi", {"statistics": "bosonic", "temp": 1.5}, **half), "iplus", OVERLAY_CHECKS))
    r.append(FigureRecipe("fig4b", "I+ against its zeroth and first order forms, fermionic, T=1.5, mu=1",
                          _cfg("lgi", {"statistics": "fermionic", "temp": 1.5, "mu": 1.0}, **half),
                          "iplus", OVERLAY_CHECKS))

    couplings = _vals("coupling", [0.001, 0.005, 0.02])
    r.append(FigureRecipe(
        "fig5a", "MLGI over (J, T), bosonic equilibrium",
        _cfg("mlgi", {"statistics": "bosonic"}, [couplings, _lin("temp", 0.1, 5.0, 11)]), "mlgi",
        (Check("single interior maximum in T at the smallest J", _fig5a_hump),
         Check("MLGI decreases with J at every T", _decreasing_in_first_axis))))
    r.append(FigureRecipe(
        "fig5b", "MLGI over (J, mu), fermionic equilibrium, T=0.5",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.5}, [couplings, _lin("mu", -1.0, 3.0, 9)]), "mlgi",
        (Check("maximum at mu = omega_bar for every J", _fig5b_resonance),
         Check("MLGI decreases with J at every mu", _decreasing_in_first_axis))))

    r.append(FigureRecipe(
        "fig6a", "MLGI over (omega_bar, theta), bosonic, T=0.1, lam=1",
        _cfg("mlgi", {"statistics": "bosonic", "temp": 0.1}, [gap_axis, theta_axis]), "mlgi",
        (Check("MLGI does not grow with omega_bar at any theta", _non_increasing_in_first_axis),)))
    r.append(FigureRecipe(
        "fig6b", "MLGI over (omega_bar, theta), bosonic, T=10, lam=1",
        _cfg("mlgi", {"statistics": "bosonic", "temp": 10.0}, [gap_axis, theta_axis]), "mlgi",
        (Check("maximum within 0.25 rad of theta = -pi/2 at every omega_bar", _fig6_theta_peak),
         Check("MLGI at theta = -pi/2 increases with omega_bar", _fig6_grows_with_gap))))
    r.append(FigureRecipe(
        "fig6c", "MLGI over (omega_bar, theta), fermionic, T=0.1, mu=0.1, lam=1",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.1, "mu": 0.1}, [gap_axis, theta_axis]), "mlgi",
        (Check("MLGI does not grow with omega_bar at any theta", _non_increasing_in_first_axis),)))
    r.append(FigureRecipe(
        "fig6d", "MLGI over (omega_bar, theta), fermionic, T=0.1, mu=2.5, lam=1",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.1, "mu": 2.5}, [gap_axis, theta_axis]), "mlgi",
        (Check("omega_bar nearest mu beats the smallest omega_bar at every theta", _fig6_resonant_gap),)))

    heat = _cfg("thermo", {"statistics": "bosonic", "temp1": 0.1, "coupling": 0.1},
                [lams, _lin("temp2", 0.1, 1.6, 50)])
    r.append(FigureRecipe(
        "fig7a", "heat current from bath 2 versus T2 at T1=0.1", heat, "current2",
        (Check("current strictly increasing in temp_diff for each lam", _monotone_rows("current2")),
         Check("lam = 0.4 carries less current than lam = 0.7 at every temp_diff > 0", _first_rows_ordered("current2")),
         Check("current ordered by lam for 0 < temp_diff <= 0.3", _ordered_where("current2", "temp2", 0, 0.3)))))
    r.append(FigureRecipe(
        "fig7b", "entropy production versus T2 at T1=0.1", copy.deepcopy(heat), "sigma",
        (Check("sigma strictly increasing in temp_diff for each lam", _monotone_rows("sigma")),
         Check("lam = 0.4 gives less sigma than lam = 0.7 at every temp_diff > 0", _first_rows_ordered("sigma")),
         Check("sigma ordered by lam for 0 < temp_diff <= 0.3", _ordered_where("sigma", "temp2", 0, 0.3)))))
    part = _cfg("thermo", {"statistics": "fermionic", "temp": 0.2, "mu1": 0.0, "mu2": 0.0, "coupling": 0.1},
                [lams, _lin("mu2", 0.0, 10.0, 41)])
    r.append(FigureRecipe(
        "fig8a", "particle current versus mu2 at mu1=0, T=0.2", part, "current2",
        (Check("current non-decreasing in mu_diff", _non_decreasing_rows("current2")),
         Check("|current| bounded by J", _bounded_by_coupling),
         Check("current saturated at the largest bias", _saturates),
         Check("lam = 0.4 carries less current than lam = 0.7 at every mu_diff > 0", _first_rows_ordered("current2")),
         Check("current ordered by lam for mu_diff <= 0.75 and for mu_diff >= 3",
               lambda ds: _ordered_where("current2", "mu2", 0, 0.75)(ds)
               and _ordered_where("current2", "mu2", 3, 10)(ds)))))
    r.append(FigureRecipe(
        "fig8b", "entropy production versus mu2 at mu1=0, T=0.2", copy.deepcopy(part), "sigma",
        (Check("sigma linear in mu_diff on [5, 10]", _sigma_linear_tail),
         Check("lam = 0.4 gives less sigma than lam = 0.7 at every mu_diff > 0", _first_rows_ordered("sigma")))))

    r.append(FigureRecipe(
        "fig9a", "MLGI over (T_m, temp_diff), bosonic",
        _cfg("mlgi", {"statistics": "bosonic"},
             [_vals("temp_mean", [0.3, 0.5, 1.0, 1.5, 2.0]), _lin("temp_diff", -0.5, 0.5, 11)]), "mlgi",
        (Check("positive temp_diff beats negative at T_m in {0.3, 0.5, 1.0}",
               _forward_bias_wins("temp_mean", "temp_diff", (0.3, 0.5, 1.0))),)))
    r.append(FigureRecipe(
        "fig9b", "MLGI over (mu_m, mu_diff), fermionic, T=0.4",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.4},
             [_vals("mu_mean", [0.0, 0.4, 1.0, 1.6]), _lin("mu_diff", -2.0, 2.0, 21)]), "mlgi",
        (Check("mu_m = 1 peaks at mu_diff = 0; mu_m = 0.4 is beaten by |mu_diff| = 1.2", _fig9b_resonance),)))

    secular = _vals("secular", [False, True])
    r.append(FigureRecipe(
        "fig10a", "Lindblad versus Bloch-Redfield MLGI, T_m=0.5",
        _cfg("mlgi", {"statistics": "bosonic", "temp_mean": 0.5}, [secular, _lin("temp_diff", -0.6, 0.6, 13)]),
        "mlgi", _fig10_checks()))
    r.append(FigureRecipe(
        "fig10b", "Lindblad versus Bloch-Redfield MLGI, T_m=1",
        _cfg("mlgi", {"statistics": "bosonic", "temp_mean": 1.0}, [secular, _lin("temp_diff", -1.2, 1.2, 13)]),
        "mlgi", _fig10_checks()))

    r.append(FigureRecipe(
        "fig11a", "MLGI and entropy production, T1=0.1 fixed",
        _cfg("mlgi", {"statistics": "bosonic", "temp1": 0.1, "coupling": 0.05}, [lams, _lin("temp2", 0.1, 2.1, 11)]),
        "mlgi",
        (Check("bias raises MLGI above its equilibrium value for each lam", _enhanced_by_bias),
         Check("larger lam gives larger MLGI at every nonzero sigma", _ordered_by_first_axis("mlgi")))))
    r.append(FigureRecipe(
        "fig11b", "MLGI and entropy production, T2=0.1 fixed",
        _cfg("mlgi", {"statistics": "bosonic", "temp2": 0.1, "coupling": 0.05}, [lams, _lin("temp1", 0.1, 2.1, 11)]),
        "mlgi",
        (Check("enhancement peaks and then fades at the largest sigma", _peak_then_fade),
         Check("peak MLGI increases with lam", _peak_ordered_by_lam))))

    theta_narrow = _lin("theta", -HALF_PI - 0.5, -HALF_PI + 0.5, 5)
    swap = Check("pop23 invariant under exchanging the qubits (1e-9)", _swap_symmetric_population)
    r.append(FigureRecipe(
        "fig12a", "MLGI over (theta, temp_diff), bosonic, T_m=0.2, lam=0.8",
        _cfg("mlgi", {"statistics": "bosonic", "temp_mean": 0.2, "lam": 0.8},
             [theta_narrow, _lin("temp_diff", -0.3, 0.3, 7)]), "mlgi",
        (Check("softer qubit on the hotter bath maximizes MLGI at temp_diff = +-0.3",
               _cold_side_detuning_wins("temp_diff", 0.3)), swap, Check("MLGI within [0, 1/2]", _in_range))))
    r.append(FigureRecipe(
        "fig12b", "MLGI over (theta, temp_diff), bosonic, T_m=2, lam=0.8",
        _cfg("mlgi", {"statistics": "bosonic", "temp_mean": 2.0, "lam": 0.8},
             [theta_narrow, _lin("temp_diff", -3.0, 3.0, 7)]), "mlgi",
        (Check("detuning never beats theta = -pi/2 at any temp_diff", _resonant_column_best),
         Check("MLGI increases with temp_diff at every theta", _forward_bias_every_theta), swap)))

    r.append(FigureRecipe(
        "fig13a", "MLGI and entropy production, fermionic, mu1=0",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.2, "mu1": 0.0, "coupling": 0.05},
             [lams, _lin("mu2", 0.0, 6.0, 13)]), "mlgi",
        (Check("bias raises MLGI above its equilibrium value for each lam", _enhanced_by_bias),
         Check("larger lam gives larger MLGI at every mu2", _ordered_by_first_axis("mlgi", skip_first=False)))))
    r.append(FigureRecipe(
        "fig13b", "MLGI and entropy production, fermionic, mu1=1",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.2, "mu1": 1.0, "coupling": 0.05},
             [lams, _lin("mu2", 1.0, 7.0, 13)]), "mlgi",
        (Check("MLGI largest at zero bias for each lam", _max_at_zero_bias),
         Check("larger lam gives larger MLGI at every mu2", _ordered_by_first_axis("mlgi", skip_first=False)))))

    mu_diff = _lin("mu_diff", -2.0, 2.0, 9)
    r.append(FigureRecipe(
        "fig14a", "MLGI over (theta, mu_diff), fermionic, T=0.2, mu_m=0.2, lam=0.8",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.2, "mu_mean": 0.2, "lam": 0.8}, [theta_narrow, mu_diff]),
        "mlgi",
        (Check("softer qubit on the higher-mu bath maximizes MLGI at mu_diff = +-1 and +-2",
               lambda ds: _cold_side_detuning_wins("mu_diff", 1.0)(ds) and _cold_side_detuning_wins("mu_diff", 2.0)(ds)),
         swap)))
    r.append(FigureRecipe(
        "fig14b", "MLGI over (theta, mu_diff), fermionic, T=0.2, mu_m=0.8, lam=0.8",
        _cfg("mlgi", {"statistics": "fermionic", "temp": 0.2, "mu_mean": 0.8, "lam": 0.8}, [theta_narrow, mu_diff]),
        "mlgi",
        (Check("global maximum at theta = -pi/2 and mu_diff = 0", _global_max_at_resonance), swap)))
    return {rec.name: rec for rec in r}


RECIPES = _recipes()


def evaluate_checks(recipe: FigureRecipe, ds) -> list:
    """(description, passed) for every assertion of ``recipe``."""
    out = []
    for check in recipe.checks:
        try:
            ok = bool(check.test(ds))
        except (ValueError, IndexError, KeyError):
            ok = False
        out.append((check.description, ok))
    return out
