"""Exact propagation and the perturbative LGI closures in the bath coupling J."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .errors import RegimeMismatch
from .liouvillian import Generator, LiouvilleState
from .model import Model, Statistics
from .steadystate import SteadyState, steady_state_closed_form


def propagator(gen: Generator, t) -> np.ndarray:
    """exp(M t); a 1-d array of times gives a stack of shape (len(t), 6, 6)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("propagation time must be non-negative")
    return expm(gen.M * t[..., None, None])


def propagate(gen: Generator, state: LiouvilleState, t: float) -> LiouvilleState:
    return LiouvilleState(propagator(gen, float(t)) @ state.v)


def first_order_propagator(gen: Generator, t: float) -> np.ndarray:
    """(1 + MJ t) exp(M0 t), exact to first order in J when M0 and MJ commute."""
    return (np.eye(6) + gen.MJ * t) @ expm(gen.M0 * t)


class Regime(str, Enum):
    BOSONIC_EQ = "bosonic_eq"
    FERMIONIC_EQ = "fermionic_eq"
    BOSONIC_NONEQ = "bosonic_noneq"
    FERMIONIC_NONEQ = "fermionic_noneq"

    @property
    def equilibrium(self):
        return self in (Regime.BOSONIC_EQ, Regime.FERMIONIC_EQ)

    @property
    def bosonic(self):
        return self in (Regime.BOSONIC_EQ, Regime.BOSONIC_NONEQ)


def regime_of(model: Model) -> Regime:
    bos = model.statistics is Statistics.BOSONIC
    if model.bath.is_equilibrium:
        return Regime.BOSONIC_EQ if bos else Regime.FERMIONIC_EQ
    return Regime.BOSONIC_NONEQ if bos else Regime.FERMIONIC_NONEQ


def _check_regime(regime: Regime, model: Model):
    if regime.bosonic != (model.statistics is Statistics.BOSONIC):
        raise RegimeMismatch(f"{regime.value} closure requested for {model.statistics.value} baths")
    if regime.equilibrium and not model.bath.is_equilibrium:
        raise RegimeMismatch(f"{regime.value} closure requested for nonequilibrium baths")
    if not regime.equilibrium and model.system.delta_omega != 0:
        raise RegimeMismatch("nonequilibrium closures require omega1 == omega2")


def correlation_c0(t, theta: float, pop23: float, Omega: float):
    """Zeroth-order two-time correlation of the qubit-1 observable."""
    t = np.asarray(t, dtype=float)
    return 1.0 - (1.0 - np.cos(Omega * t)) * math.sin(theta) ** 2 * pop23


class LgiValues(NamedTuple):
    I2: np.ndarray
    Iplus: np.ndarray
    Iminus: np.ndarray


def lgi_zeroth(t, eb, steady: SteadyState) -> LgiValues:
    """Coherent-evolution LGI functions evaluated on a given steady state."""
    t = np.asarray(t, dtype=float)
    p = steady.populations
    pop = p[1] + p[2]
    th, Om = eb.theta, eb.Omega
    w = math.sin(th) ** 2 * pop
    c1, c2 = np.cos(Om * t), np.cos(2 * Om * t)
    iplus = 1 + (2 * c1 - c2 - 1) * w
    iminus = -3 + (3 - 2 * c1 - c2) * w
    i2 = (2 * (p[0] - p[3]) + 2 * math.cos(th) * (p[2] - p[1])
          + 4 * math.sin(th) * steady.rho23.real + (1 - c1) * w - 1)
    return LgiValues(i2, iplus, iminus)


def lgi_first_order(regime: Regime, t, model: Model, steady: SteadyState):
    """First-order-in-J correction to I+ for the given regime."""
    _check_regime(regime, model)
    t = np.asarray(t, dtype=float)
    J = model.bath.J
    p = steady.populations
    pop = p[1] + p[2]
    occ = model.occupations
    if regime.equilibrium:
        Om = model.eigenbasis.Omega
        w = math.sin(model.eigenbasis.theta) ** 2 * pop
        if regime.bosonic:
            w *= occ.n1_w1 + occ.n1_w2 + 1
        return 4 * t * J * w * (np.cos(2 * Om * t) - np.cos(Om * t))
    lam = model.system.lam
    dn = occ.delta_n1 + occ.delta_n2
    osc = np.cos(2 * lam * t) - np.cos(lam * t)
    drift = np.sin(2 * lam * t) - 2 * np.sin(lam * t)
    if regime.bosonic:
        g = occ.tilde_n1 + occ.tilde_n2 + 1
        return 4 * t * J * pop * g * osc + 2 * J / lam * dn * drift
    return 4 * t * J * pop * osc + 2 * J / lam * dn * (p[0] - p[3]) * drift


def trust_score(model: Model, t):
    """t J max(n); the first-order closures need this to be small."""
    return np.asarray(t, dtype=float) * model.trust_scale


@dataclass(frozen=True)
class PerturbativeLgi:
    """Bundle of the closed-form LGI overlays for one model and steady state."""

    regime: Regime
    model: Model
    steady: SteadyState
    order: int = 1

    def c0(self, t):
        eb = self.model.eigenbasis
        p = self.steady.populations
        return correlation_c0(t, eb.theta, p[1] + p[2], eb.Omega)

    def zeroth(self, t) -> LgiValues:
        return lgi_zeroth(t, self.model.eigenbasis, self.steady)

    def iplus_first(self, t):
        return lgi_first_order(self.regime, t, self.model, self.steady)

    def iplus(self, t):
        out = self.zeroth(t).Iplus
        if self.order >= 1:
            out = out + self.iplus_first(t)
        return out


def perturbative_lgi(model: Model, steady: SteadyState | None = None, order: int = 1) -> PerturbativeLgi:
    regime = regime_of(model)
    _check_regime(regime, model)
    if steady is None:
        steady = steady_state_closed_form(model)
    return PerturbativeLgi(regime, model, steady, order)


@dataclass(frozen=True)
class MlgiApproximation:
    value: float
    valid: bool
    note: str


def equilibrium_alpha(model: Model) -> float:
    """Low-temperature population weight 2 exp(-wbar/T) cosh(Omega/2T)."""
    T = model.bath.T1
    wb, Om = model.system.omega_bar, model.eigenbasis.Omega
    return 2 * math.exp(-wb / T) * math.cosh(Om / (2 * T))


def effective_temperature(T1: float, T2: float) -> float:
    Tm, dT = 0.5 * (T1 + T2), abs(T2 - T1)
    return 2 * Tm * Tm / (2 * Tm - dT)


def nonequilibrium_alpha(model: Model) -> float:
    Teff = effective_temperature(model.bath.T1, model.bath.T2)
    eb = model.eigenbasis
    return math.exp(-eb.omega1p / Teff) + math.exp(-eb.omega2p / Teff)


def resonance_population_sum(lam: float, T: float, delta_mu: float) -> float:
    """rho22 + rho33 for fermionic baths with mean chemical potential at wbar,
    omega1 == omega2, to zeroth order in J."""
    x, y = lam / (2 * T), delta_mu / (2 * T)
    first = math.cosh(x) / (math.cosh(y) + math.cosh(x))
    second = math.sinh(y) ** 2 / (2 * (math.cosh(y + x) + 1) * (math.cosh(y - x) + 1))
    return first + second


# validity windows for the temperature approximations
LOW_T_FRACTION = 0.25
HIGH_T_MULTIPLE = 5.0


def mlgi_approximations(regime: Regime, model: Model, steady: SteadyState | None = None) -> dict:
    """Closed-form MLGI estimates for ``regime`` keyed by name.

    Every regime provides ``first_order`` (zeroth plus first order at the
    zeroth-order maximizer). Bosonic regimes add temperature-limit forms.
    """
    _check_regime(regime, model)
    if steady is None:
        steady = steady_state_closed_form(model)
    J = model.bath.J
    eb = model.eigenbasis
    p = steady.populations
    pop = p[1] + p[2]
    occ = model.occupations
    dn = occ.delta_n1 + occ.delta_n2
    sin2 = math.sin(eb.theta) ** 2
    bath = model.bath
    out = {}
    low_ok = max(bath.T1, bath.T2) <= LOW_T_FRACTION * eb.omega1p
    if regime is Regime.BOSONIC_EQ:
        g = occ.tilde_n1 + occ.tilde_n2 + 1
        out["first_order"] = MlgiApproximation(
            sin2 * pop * (0.5 - 4 * math.pi * J / (3 * eb.Omega) * g), True, "valid while J t n << 1")
        out["low_temperature"] = MlgiApproximation(
            equilibrium_alpha(model) * sin2 * (0.5 - 4 * math.pi * J / (3 * eb.Omega)), low_ok,
            f"requires T <= {LOW_T_FRACTION} omega1'")
    elif regime is Regime.FERMIONIC_EQ:
        out["first_order"] = MlgiApproximation(
            sin2 * pop * (0.5 - 4 * math.pi * J / (3 * eb.Omega)), True, "valid while J t << 1")
    elif regime is Regime.BOSONIC_NONEQ:
        lam = model.system.lam
        g = occ.tilde_n1 + occ.tilde_n2 + 1
        out["first_order"] = MlgiApproximation(
            pop * (0.5 - 4 * math.pi * J / (3 * lam) * g) - math.sqrt(3) * J / lam * dn, True,
            "valid while J t n << 1")
        sign = 1.0 if bath.T2 > bath.T1 else -1.0
        out["low_temperature"] = MlgiApproximation(
            nonequilibrium_alpha(model) * (0.5 + J / lam * (sign * math.sqrt(3) - 4 * math.pi / 3)),
            low_ok, f"requires T1, T2 <= {LOW_T_FRACTION} omega1'")
        inv = 1 / eb.omega1p + 1 / eb.omega2p
        high = 0.25 + J / lam * (inv * (math.sqrt(3) / 2 * bath.delta_T - 2 * math.pi / 3 * bath.T_m)
                                 - 2 * math.pi / 3)
        out["high_temperature"] = MlgiApproximation(
            high, bath.T_m >= HIGH_T_MULTIPLE * model.system.omega_bar,
            f"requires T_m >= {HIGH_T_MULTIPLE} omega_bar")
    else:
        lam = model.system.lam
        out["first_order"] = MlgiApproximation(
            (0.5 - 4 * math.pi * J / (3 * lam)) * pop + math.sqrt(3) * J / lam * dn * (p[3] - p[0]), True,
            "valid while J t << 1")
    return out
