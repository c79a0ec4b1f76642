"""Steady states by closed form, population-matrix elimination and generator kernel."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonUniqueSteadyState, SingularCoherenceBlock
from .liouvillian import Generator, LiouvilleState, build_block_generator
from .model import Model, Statistics


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    POPULATION_MATRIX = "population_matrix"
    NULL_SPACE = "null_space"


@dataclass(frozen=True)
class SteadyState:
    state: LiouvilleState
    method: Method
    kappa: float | None = None
    s: np.ndarray | None = None
    norm: float | None = None

    @property
    def populations(self):
        return self.state.populations

    @property
    def rho23(self):
        return self.state.rho23


def _weights(model: Model):
    occ = model.occupations
    return occ.tilde_n1, occ.tilde_n2, occ.delta_n1, occ.delta_n2


def _kappa(model: Model) -> float:
    t1, t2, _, _ = _weights(model)
    r = model.eigenbasis.Omega / (2 * model.bath.J)
    if model.statistics is Statistics.BOSONIC:
        g = t1 + t2 + 1
        return g / (g * g + r * r)
    return 1.0 / (1.0 + r * r)


def steady_state_closed_form(model: Model) -> SteadyState:
    t1, t2, d1, d2 = _weights(model)
    J, Om = model.bath.J, model.eigenbasis.Omega
    k = _kappa(model)
    if model.statistics is Statistics.BOSONIC:
        g = 3 + 2 * t1 + 2 * t2
        h = 1 + 2 * t1 + 2 * t2
        s = np.array([d2 - d1 * g, d1 - d2 * g, d2 + d1 * h, d1 + d2 * h])
        norm = (1 + 2 * t1) * (1 + 2 * t2) - 4 * k * d1 * d2 * (1 + t1 + t2)
        q = 4 * (1 + t1 + t2)
        pops = np.array([
            (1 + t1) * (1 + t2) - k * s[0] * s[1] / q,
            t1 * (1 + t2) + k * s[1] * s[2] / q,
            t2 * (1 + t1) + k * s[0] * s[3] / q,
            t1 * t2 - k * s[2] * s[3] / q,
        ]) / norm
        rho23 = (d1 * (1 + 2 * t2) + d2 * (1 + 2 * t1)) / (2 * (1 + t1 + t2) - 1j * Om / J) / norm
        return SteadyState(LiouvilleState.from_populations(pops, rho23), Method.CLOSED_FORM, k, s, norm)
    x = 0.25 * k * (d1 + d2) ** 2
    pops = np.array([
        (1 - t1) * (1 - t2) - x,
        t1 * (1 - t2) + x,
        t2 * (1 - t1) + x,
        t1 * t2 - x,
    ])
    # the fermionic populations sum to one identically
    rho23 = (d1 + d2) / (2 - 1j * Om / J)
    return SteadyState(LiouvilleState.from_populations(pops, rho23), Method.CLOSED_FORM, k, None, 1.0)


@dataclass(frozen=True)
class PopulationMatrix:
    """Population-only generator after eliminating the coherences."""

    closed: np.ndarray
    eliminated: np.ndarray


def _check_cc(gen: Generator):
    cc = gen.cc
    if abs(np.linalg.det(cc)) <= 1e-14 * np.linalg.norm(cc):
        raise SingularCoherenceBlock("coherence block of the generator is singular")


def eliminate_coherences(gen: Generator) -> np.ndarray:
    _check_cc(gen)
    return (gen.pp - gen.pc @ np.linalg.solve(gen.cc, gen.cp)).real


def population_matrix_closed(model: Model) -> np.ndarray:
    t1, t2, d1, d2 = _weights(model)
    k = _kappa(model)
    S = (d1 + d2) ** 2
    if model.statistics is Statistics.BOSONIC:
        D = (d1 - d2) ** 2
        Q = d1 * d1 - d2 * d2
        A = [
            [-2 * (t1 + t2) + k * S, 2 * (t1 + 1) - k * Q, 2 * (t2 + 1) + k * Q, -k * S],
            [2 * t1 + k * Q, -2 * (t1 + t2 + 1) - k * D, k * D, 2 * (t2 + 1) - k * Q],
            [2 * t2 - k * Q, k * D, -2 * (t1 + t2 + 1) - k * D, 2 * (t1 + 1) + k * Q],
            [-k * S, 2 * t2 + k * Q, 2 * t1 - k * Q, -2 * (t1 + t2 + 2) + k * S],
        ]
    else:
        A = [
            [-2 * (t1 + t2) - k * S, 2 * (1 - t1) - k * S, 2 * (1 - t2) - k * S, -k * S],
            [2 * t1 + k * S, 2 * (t1 - t2 - 1) + k * S, k * S, 2 * (1 - t2) + k * S],
            [2 * t2 + k * S, k * S, 2 * (t2 - t1 - 1) + k * S, 2 * (1 - t1) + k * S],
            [-k * S, 2 * t2 - k * S, 2 * t1 - k * S, 2 * (t1 + t2 - 2) - k * S],
        ]
    return model.bath.J * np.array(A)


def population_matrix(model: Model, gen: Generator | None = None) -> PopulationMatrix:
    """Closed-form population matrix alongside the numerically eliminated one.

    ``gen`` defaults to the non-secular block generator of ``model``.
    """
    if gen is None:
        gen = build_block_generator(model)
    return PopulationMatrix(population_matrix_closed(model), eliminate_coherences(gen))


def _kernel_vector(A: np.ndarray, label: str) -> np.ndarray:
    _, s, vh = np.linalg.svd(A)
    if s[-2] <= 1e-10 * np.linalg.norm(A):
        raise NonUniqueSteadyState(f"{label} kernel is not one-dimensional (sigma = {s[-2]:.3e})")
    return vh[-1].conj()


def steady_state_nullspace(gen: Generator) -> SteadyState:
    v = _kernel_vector(gen.M, "generator")
    v = v / v[:4].sum()
    v[4:] = 0.5 * (v[4:] + v[4:][::-1].conj())
    v[:4] = v[:4].real
    return SteadyState(LiouvilleState(v), Method.NULL_SPACE)


def steady_state_population_matrix(model: Model, gen: Generator | None = None) -> SteadyState:
    """Kernel of the closed-form population matrix, coherences restored from ``gen``."""
    if gen is None:
        gen = build_block_generator(model)
    _check_cc(gen)
    p = _kernel_vector(population_matrix_closed(model), "population matrix").real
    p = p / p.sum()
    c = -np.linalg.solve(gen.cc, gen.cp @ p)
    return SteadyState(LiouvilleState.from_populations(p, c[0]), Method.POPULATION_MATRIX, _kappa(model))
