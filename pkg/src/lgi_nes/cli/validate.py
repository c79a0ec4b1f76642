"""Cross-check suite: every quantity computed two independent ways."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..dynamics import perturbative_lgi
from ..errors import LgiNesError
from ..lgi import correlation, inm_correlation, lgi_functions, qubit1_observable
from ..liouvillian import BLOCK_INDEX, Generator, build_block_generator, build_full_liouvillian, project_block
from ..model import make_model, number_operator
from ..steadystate import (
    eliminate_coherences,
    population_matrix_closed,
    steady_state_closed_form,
    steady_state_nullspace,
    steady_state_population_matrix,
)
from ..thermo import currents

BLOCK_LABELS = tuple(f"{a + 1}{b + 1}" for a, b in BLOCK_INDEX)
STATE_LABELS = ("rho11", "rho22", "rho33", "rho44", "rho23", "rho32")


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    where: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        at = f" at {self.where}" if self.where else ""
        return f"{tag} {self.name}: max residual {self.residual:.3g} (tol {self.tolerance:g}){at}"


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def format(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append("all checks passed" if self.passed else "validation FAILED")
        return "\n".join(lines)


class _Worst:
    """Running maximum of a residual with the label where it occurred."""

    def __init__(self):
        self.value, self.where = 0.0, ""

    def update(self, value, where):
        value = float(value)
        if np.isfinite(self.value) and (value > self.value or not np.isfinite(value)):
            self.value, self.where = value, where


def random_models(n: int, seed: int = 0):
    """``n`` random valid models, alternating bosonic and fermionic baths."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        w1, w2 = rng.uniform(0.5, 2.0, 2)
        lam = rng.uniform(0.05, 0.95) * math.sqrt(w1 * w2)
        T1, T2 = rng.uniform(0.1, 3.0, 2)
        J = 10 ** rng.uniform(-3, -1)
        if k % 2 == 0:
            m = make_model(w1, w2, lam, "bosonic", T1, T2, J=J)
        else:
            mu1, mu2 = rng.uniform(-1.0, 2.0, 2)
            m = make_model(w1, w2, lam, "fermionic", T1, T2, mu1, mu2, J=J)
        out.append(m)
    return out


def _label(model, k):
    return f"{model.statistics.value} sample {k}"


def check_generator(models, block_builder) -> CheckResult:
    worst = _Worst()
    for k, m in enumerate(models):
        diff = np.abs(block_builder(m).M - project_block(build_full_liouvillian(m)))
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        worst.update(diff[i, j], f"M[{BLOCK_LABELS[i]},{BLOCK_LABELS[j]}], {_label(m, k)}")
    return CheckResult("generator_vs_operator_dissipators", worst.value, 1e-10, worst.where)


def check_population_matrix(models, block_builder) -> CheckResult:
    worst = _Worst()
    for k, m in enumerate(models):
        closed = population_matrix_closed(m)
        diff = np.abs(closed - eliminate_coherences(block_builder(m))) / np.abs(closed).max()
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        worst.update(diff[i, j], f"A[{i + 1},{j + 1}], {_label(m, k)}")
    return CheckResult("population_matrix_closed_vs_eliminated", worst.value, 1e-9, worst.where)


def check_steady_states(models, block_builder) -> CheckResult:
    worst = _Worst()
    for k, m in enumerate(models):
        gen = block_builder(m)
        ref = steady_state_closed_form(m).state.v
        for other in (steady_state_nullspace(gen), steady_state_population_matrix(m, gen)):
            diff = np.abs(other.state.v - ref)
            i = int(np.argmax(diff))
            worst.update(diff[i], f"{STATE_LABELS[i]} ({other.method.value}), {_label(m, k)}")
    return CheckResult("steady_state_closed_vs_nullspace_vs_elimination", worst.value, 1e-9, worst.where)


def gibbs_populations(model) -> np.ndarray:
    """Equilibrium energy-basis populations: canonical for bosons, grand-canonical for fermions."""
    bath = model.bath
    E = model.eigenbasis.energies - bath.mu1 * np.diag(number_operator()).real
    w = np.exp(-(E - E.min()) / bath.T1)
    return w / w.sum()


def check_gibbs(models) -> CheckResult:
    worst = _Worst()
    for k, m in enumerate(models):
        b = m.bath
        eq = make_model(m.system.omega1, m.system.omega2, m.system.lam, m.statistics.value, b.T1, b.T1,
                        b.mu1, b.mu1, J=b.J)
        ss = steady_state_closed_form(eq)
        diff = np.abs(np.concatenate([ss.populations - gibbs_populations(eq), [abs(ss.rho23)]]))
        i = int(np.argmax(diff))
        worst.update(diff[i], f"{STATE_LABELS[i]}, {_label(eq, k)}")
    return CheckResult("equilibrium_steady_state_vs_gibbs", worst.value, 1e-9, worst.where)


def check_currents(models) -> list:
    cons, agree = _Worst(), _Worst()
    for k, m in enumerate(models):
        pair = currents(m, steady_state_closed_form(m))
        tr = pair.dissipator_trace
        cons.update(abs(tr.I1 + tr.I2), _label(m, k))
        agree.update(abs(tr.I2 - pair.closed_form.I2), _label(m, k))
    return [CheckResult("current_conservation_I1_plus_I2", cons.value, 1e-9, cons.where),
            CheckResult("current_closed_vs_trace", agree.value, 1e-9, agree.where)]


def check_saturation() -> CheckResult:
    worst = _Worst()
    for lam in (0.4, 0.7, 1.0):
        J = 0.1
        m = make_model(1.0, 1.0, lam, "fermionic", 0.05, 0.05, 0.0, 10.0, J=J)
        got = currents(m, steady_state_closed_form(m)).dissipator_trace.I2
        want = J * (1 - 1 / (1 + (lam / (2 * J)) ** 2))
        worst.update(abs(got / want - 1), f"lam={lam}")
    return CheckResult("fermionic_current_saturation_relative", worst.value, 0.02, worst.where)


def check_monotone_heat() -> CheckResult:
    """Residual counts the non-increasing steps on the 50-point bias grid."""
    T2 = np.linspace(0.1, 1.6, 50)
    bad, where = 0, ""
    for lam in (0.4, 0.7, 1.0):
        reports = []
        for t2 in T2:
            m = make_model(1.0, 1.0, lam, "bosonic", 0.1, t2, J=0.1)
            reports.append(currents(m, steady_state_closed_form(m)).dissipator_trace)
        for name in ("I2", "sigma"):
            steps = np.diff([getattr(r, name) for r in reports])
            for k in np.nonzero(steps <= 0)[0]:
                bad += 1
                where = where or f"{name}, lam={lam}, T2={T2[k + 1]:.3f}"
    return CheckResult("bosonic_current_and_sigma_increasing", float(bad), 0.0, where)


def figure3_models():
    return [make_model(1.0, 1.0, 1.0, "bosonic", 1.5, 1.5, J=0.005),
            make_model(1.0, 1.0, 1.0, "fermionic", 1.5, 1.5, 1.0, 1.0, J=0.005)]


def check_inm(models, times=(0.3, 1.0, 2.0)) -> list:
    """Ancilla circuit against the direct correlation at ``times`` in units of 1/Omega."""
    coh, diss = _Worst(), _Worst()
    for k, m in enumerate(models):
        ts = np.array(times) / m.eigenbasis.Omega
        obs = qubit1_observable(m.eigenbasis)
        gen = build_block_generator(m)
        ss = steady_state_closed_form(m)
        L16 = build_full_liouvillian(m)
        direct = correlation(gen, obs, ss.state, ts)
        coherent = correlation(Generator(gen.M0), obs, ss.state, ts)
        for t, wt, d, c in zip(ts, times, direct, coherent):
            where = f"Omega t={wt}, {_label(m, k)}"
            diss.update(abs(inm_correlation(obs, L16, ss.state, t) - d), where)
            coh.update(abs(inm_correlation(obs, m.eigenbasis.hamiltonian, ss.state, t) - c), where)
    return [CheckResult("inm_coherent_vs_direct_correlation", coh.value, 1e-10, coh.where),
            CheckResult("inm_dissipative_vs_direct_correlation", diss.value, 1e-8, diss.where)]


def check_perturbative() -> CheckResult:
    """Zeroth plus first order I+ against the exact trace for the four regimes."""
    cases = [
        ("bosonic", 1.5, 1.5, 0.0, 0.0),
        ("fermionic", 1.5, 1.5, 1.0, 1.0),
        ("bosonic", 0.5, 0.8, 0.0, 0.0),
        ("fermionic", 0.5, 0.5, 0.6, 1.2),
    ]
    worst = _Worst()
    for stat, T1, T2, mu1, mu2 in cases:
        m = make_model(1.0, 1.0, 1.0, stat, T1, T2, mu1, mu2, J=0.005)
        ss = steady_state_closed_form(m)
        Om = m.eigenbasis.Omega
        t = np.linspace(0.0, 2 * math.pi / (3 * Om), 121)[1:]
        exact = lgi_functions(build_block_generator(m), qubit1_observable(m.eigenbasis), ss, t).Iplus
        res = np.abs(exact - perturbative_lgi(m, ss).iplus(t))
        k = int(np.argmax(res))
        worst.update(res[k], f"{stat} T=({T1},{T2}) mu=({mu1},{mu2}) Omega t={Om * t[k]:.3f}")
    return CheckResult("perturbative_iplus_overlay", worst.value, 0.02, worst.where)


def run_validation(block_builder=build_block_generator, samples: int = 200, seed: int = 0,
                   perturbative: bool = True) -> ValidationReport:
    """Run every cross-check. ``block_builder`` is swappable so a deliberately
    broken generator can serve as a negative control."""
    models = random_models(samples, seed)
    report = ValidationReport()
    steps = [
        lambda: [check_generator(models, block_builder)],
        lambda: [check_population_matrix(models, block_builder)],
        lambda: [check_steady_states(models, block_builder)],
        lambda: [check_gibbs(models)],
        lambda: check_currents(models),
        lambda: [check_saturation()],
        lambda: [check_monotone_heat()],
        lambda: check_inm(figure3_models() + models[:6]),
    ]
    if perturbative:
        steps.append(lambda: [check_perturbative()])
    for step in steps:
        try:
            report.checks.extend(step())
        except (LgiNesError, np.linalg.LinAlgError) as exc:
            report.checks.append(CheckResult(f"error: {type(exc).__name__}", math.inf, 0.0, str(exc)))
    return report
