"""Steady-state heat and particle currents and entropy production."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import ParameterError, StatisticsMismatch
from .liouvillian import dissipator_apply
from .model import Model, Statistics, number_operator
from .steadystate import SteadyState


class CurrentMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    DISSIPATOR_TRACE = "dissipator_trace"


@dataclass(frozen=True)
class ThermoReport:
    """Currents into the system from bath 1 and bath 2, positive inward."""

    I1: float
    I2: float
    sigma: float
    method: CurrentMethod
    far_from_equilibrium_sigma: float | None = None


class CurrentPair(NamedTuple):
    closed_form: ThermoReport
    dissipator_trace: ThermoReport


def _closed_form_current(model: Model, steady: SteadyState, weights) -> float:
    # outflow to bath 1 written with bath-1 rates; equals the bath-2 inflow
    # only at steady state
    th = model.eigenbasis.theta
    c2, s2, sn = math.cos(th / 2) ** 2, math.sin(th / 2) ** 2, math.sin(th)
    a1, a2 = model.rates.alpha[0]
    b1, b2 = model.rates.beta[0]
    w1, w2 = weights
    r = steady.populations
    co = 2 * steady.rho23.real
    return (
        -2 * (c2 * a1 * w1 + s2 * a2 * w2) * r[0]
        + 2 * (c2 * b1 * w1 - s2 * a2 * w2) * r[1]
        + 2 * (s2 * b2 * w2 - c2 * a1 * w1) * r[2]
        + 2 * (c2 * b1 * w1 + s2 * b2 * w2) * r[3]
        - 0.5 * sn * (b2 + a2) * w1 * co
        - 0.5 * sn * (b1 + a1) * w2 * co
    )


def _trace_current(model: Model, steady: SteadyState, l: int, op: np.ndarray) -> float:
    return float(np.trace(dissipator_apply(l, steady.state.full, model) @ op).real)


def _report(i1, i2, sigma_fn, method):
    sigma, far = sigma_fn(i2)
    return ThermoReport(i1, i2, sigma, method, far)


def _currents(model, steady, op, weights, sigma_fn):
    i2 = float(_closed_form_current(model, steady, weights))
    closed = _report(-i2, i2, sigma_fn, CurrentMethod.CLOSED_FORM)
    t1 = _trace_current(model, steady, 1, op)
    t2 = _trace_current(model, steady, 2, op)
    return CurrentPair(closed, _report(t1, t2, sigma_fn, CurrentMethod.DISSIPATOR_TRACE))


def _bosonic_sigma(model):
    T1, T2 = model.bath.T1, model.bath.T2
    return lambda i2: (i2 * (1 / T1 - 1 / T2), i2 / T1)


def _fermionic_sigma(model):
    bath = model.bath
    if bath.T1 != bath.T2:
        return lambda i2: (float("nan"), None)
    return lambda i2: (bath.delta_mu / bath.T1 * i2, None)


def heat_current(model: Model, steady: SteadyState) -> CurrentPair:
    """Energy currents for bosonic baths, by closed form and by dissipator trace."""
    if model.statistics is not Statistics.BOSONIC:
        raise StatisticsMismatch("heat current is defined for bosonic baths")
    eb = model.eigenbasis
    return _currents(model, steady, eb.hamiltonian, (eb.omega1p, eb.omega2p), _bosonic_sigma(model))


def particle_current(model: Model, steady: SteadyState) -> CurrentPair:
    """Particle currents for fermionic baths.

    The entropy production is NaN unless both baths share one temperature.
    """
    if model.statistics is not Statistics.FERMIONIC:
        raise StatisticsMismatch("particle current is defined for fermionic baths")
    return _currents(model, steady, number_operator(), (1.0, 1.0), _fermionic_sigma(model))


def currents(model: Model, steady: SteadyState) -> CurrentPair:
    if model.statistics is Statistics.BOSONIC:
        return heat_current(model, steady)
    return particle_current(model, steady)


def entropy_production(model: Model, report: ThermoReport) -> float:
    """Entropy production rate from the bath-2 current."""
    bath = model.bath
    if model.statistics is Statistics.BOSONIC:
        return report.I2 * (1 / bath.T1 - 1 / bath.T2)
    if bath.T1 != bath.T2:
        raise ParameterError("fermionic entropy production needs T1 == T2")
    return bath.delta_mu / bath.T1 * report.I2
