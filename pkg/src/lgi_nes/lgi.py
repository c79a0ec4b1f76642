"""Measurement of the qubit-1 observable, correlation functions, LGI functions,
time-maximized violation and the ancilla-based negative-measurement circuit."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from .dynamics import LgiValues, propagator
from .errors import UnsupportedEvolution
from .liouvillian import BLOCK_INDEX, POSITIVITY_TOL, Generator, LiouvilleState
from .model import Eigenbasis, sigma_z
from .steadystate import SteadyState


@dataclass(frozen=True)
class Observable:
    """Dichotomic observable in the energy basis with its two projectors."""

    Q: np.ndarray
    plus: np.ndarray
    minus: np.ndarray

    @classmethod
    def from_matrix(cls, Q) -> "Observable":
        Q = np.asarray(Q, dtype=float)
        eye = np.eye(Q.shape[0])
        return cls(Q, 0.5 * (eye + Q), 0.5 * (eye - Q))

    @property
    def row(self) -> np.ndarray:
        """Linear functional v -> Tr(Q rho) on the 6-dim block."""
        return np.array([self.Q[b, a] for a, b in BLOCK_INDEX])


def qubit1_observable(eb: Eigenbasis) -> Observable:
    """sigma_z of qubit 1 rotated into the energy basis."""
    return Observable.from_matrix(eb.U.T @ sigma_z(1) @ eb.U)


def _to_block(rho) -> np.ndarray:
    return np.array([rho[a, b] for a, b in BLOCK_INDEX], dtype=complex)


def measure_superop(obs: Observable, state: LiouvilleState) -> LiouvilleState:
    """Outcome-weighted post-measurement operator, truncated to the 6-dim block."""
    rho = state.full
    out = obs.plus @ rho @ obs.plus - obs.minus @ rho @ obs.minus
    return LiouvilleState(_to_block(out))


def _evolved(gen: Generator, v0: np.ndarray, t) -> np.ndarray:
    P = propagator(gen, t)
    return P @ v0


def correlation_complex(gen: Generator, obs: Observable, rho0: LiouvilleState, t):
    """Tr(Q exp(W t)(Q rho0)). Its real part is the symmetrized correlation;
    the imaginary part measures how far Q and rho0 fail to commute."""
    v0 = _to_block(obs.Q @ rho0.full)
    return _evolved(gen, v0, t) @ obs.row


def correlation(gen: Generator, obs: Observable, rho0: LiouvilleState, t):
    v0 = measure_superop(obs, rho0).v
    return (_evolved(gen, v0, t) @ obs.row).real


def expectation(obs: Observable, state: LiouvilleState) -> float:
    return float((obs.row @ state.v).real)


def lgi_functions(gen: Generator, obs: Observable, steady: SteadyState, t) -> LgiValues:
    """Two- and three-time LGI functions for equal time spacing ``t``."""
    t = np.asarray(t, dtype=float)
    c = correlation(gen, obs, steady.state, np.stack([t, 2 * t]))
    c1, c2 = c[0], c[1]
    q = expectation(obs, steady.state)
    return LgiValues(2 * q - c1, 2 * c1 - c2, -2 * c1 - c2)


def _objectives(gen, obs, steady):
    q = expectation(obs, steady.state)
    v0 = measure_superop(obs, steady.state).v
    row = obs.row

    def corr(t):
        return float((expm(gen.M * t) @ v0 @ row).real)

    return {
        "Iplus": lambda t: 2 * corr(t) - corr(2 * t) - 1,
        "Iminus": lambda t: -2 * corr(t) - corr(2 * t) - 1,
        "I2": lambda t: 0.5 * (2 * q - corr(t)) - 1,
    }


@dataclass
class LgiReport:
    t_grid: np.ndarray
    I2: np.ndarray
    Iplus: np.ndarray
    Iminus: np.ndarray
    t_star: float
    mlgi: float
    attained_by: str
    violated: bool
    positivity_flags: np.ndarray
    min_eigenvalue: float = field(default=0.0)

    @property
    def positivity_ok(self) -> bool:
        return not bool(np.any(self.positivity_flags))


def _conditional_min_eigs(gen, obs, steady, t_grid):
    # smallest eigenvalue of each evolved post-measurement branch
    rho = steady.state.full
    P = propagator(gen, t_grid)
    lo = np.full(len(t_grid), np.inf)
    for proj in (obs.plus, obs.minus):
        branch = _to_block(proj @ rho @ proj)
        vt = P @ branch
        mats = np.zeros((len(t_grid), 4, 4), dtype=complex)
        for k, (a, b) in enumerate(BLOCK_INDEX):
            mats[:, a, b] = vt[:, k]
        mats[:, 0, 3] = mats[:, 3, 0] = 0
        herm = 0.5 * (mats + np.conj(np.swapaxes(mats, 1, 2)))
        lo = np.minimum(lo, np.linalg.eigvalsh(herm).min(axis=1))
    return lo


def default_t_max(eb: Eigenbasis, omega_bar: float) -> float:
    scale = eb.Omega if eb.Omega > 0 else omega_bar
    return 4 * math.pi / scale


def mlgi(gen: Generator, obs: Observable, steady: SteadyState, t_max: float,
         grid: int = 512, refine_tol: float = 1e-8) -> LgiReport:
    """Maximize I+, I- and I2/2 over (0, t_max].

    A uniform scan locates candidate maxima of each function; each candidate is
    refined with bounded Brent search on its neighbouring grid cell.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    t_grid = np.linspace(0.0, t_max, grid + 1)
    vals = lgi_functions(gen, obs, steady, t_grid)
    series = {"Iplus": vals.Iplus - 1, "Iminus": vals.Iminus - 1, "I2": 0.5 * vals.I2 - 1}
    funcs = _objectives(gen, obs, steady)

    best = (float(series["Iplus"][0]), 0.0, "Iplus")
    for name, y in series.items():
        for k in range(1, grid + 1):
            left = y[k - 1]
            right = y[k + 1] if k < grid else -np.inf
            if not (y[k] > left and y[k] >= right):
                continue
            if y[k] > best[0]:
                best = (float(y[k]), float(t_grid[k]), name)
            lo, hi = t_grid[k - 1], t_grid[min(k + 1, grid)]
            f = funcs[name]
            res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                                  options={"xatol": refine_tol})
            if -res.fun > best[0]:
                best = (float(-res.fun), float(res.x), name)

    value, t_star, name = best
    lo = _conditional_min_eigs(gen, obs, steady, t_grid)
    flags = lo < -POSITIVITY_TOL
    return LgiReport(t_grid, vals.I2, vals.Iplus, vals.Iminus, t_star, value, name,
                     value > 1e-12, flags, float(lo.min()))


# ----- negative-measurement circuit -----

_KET0 = np.array([[1.0, 0.0], [0.0, 0.0]])
_KET1 = np.array([[0.0, 0.0], [0.0, 1.0]])
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_I2 = np.eye(2)


def _controlled_flip(flip_on: np.ndarray, keep_on: np.ndarray) -> np.ndarray:
    """Flip the ancilla when the system lies in ``flip_on``."""
    return np.kron(keep_on, _I2) + np.kron(flip_on, _X)


def _evolve_with_ancilla(evolution, R: np.ndarray, t: float) -> np.ndarray:
    """Evolve a system (x) ancilla density matrix; the ancilla is left untouched."""
    if evolution.shape == (4, 4):
        U = np.kron(expm(-1j * evolution * t), _I2)
        return U @ R @ U.conj().T
    # reorder (s, x, s', x') -> (s, s', x, x') so the Liouvillian acts on the first pair
    T4 = R.reshape(4, 2, 4, 2).transpose(0, 2, 1, 3).reshape(64)
    L64 = np.kron(evolution, np.eye(4))
    out = expm(L64 * t) @ T4
    return out.reshape(4, 4, 2, 2).transpose(0, 2, 1, 3).reshape(8, 8)


def inm_joint_probabilities(obs: Observable, evolution, rho0, t: float) -> dict:
    """Joint probabilities P(a, b) of outcomes a at time 0 and b at time t.

    ``evolution`` is a 4x4 Hamiltonian (coherent) or a 16x16 Liouvillian.
    Each pair (a, b) is a separate run: ancilla 1 is flipped when the system
    is in the -a subspace, ancilla 2 when it is in the -b subspace, and only
    runs with both ancillas unflipped are kept.
    """
    if isinstance(evolution, Generator):
        raise UnsupportedEvolution("the 6-dim block generator cannot evolve system-ancilla coherences")
    evolution = np.asarray(evolution)
    if evolution.shape not in ((4, 4), (16, 16)):
        raise UnsupportedEvolution(f"evolution of shape {evolution.shape} is not supported")
    rho0 = rho0.full if isinstance(rho0, LiouvilleState) else np.asarray(rho0, dtype=complex)
    proj = {1: obs.plus, -1: obs.minus}
    keep = np.kron(np.kron(np.eye(4), _KET0), _KET0)
    probs = {}
    for a in (1, -1):
        G1 = _controlled_flip(proj[-a], proj[a])
        R = G1 @ np.kron(rho0, _KET0) @ G1.T
        R = _evolve_with_ancilla(evolution, R, t)
        for b in (1, -1):
            G2 = _controlled_flip(np.kron(proj[-b], _I2), np.kron(proj[b], _I2))
            S = G2 @ np.kron(R, _KET0) @ G2.T
            probs[(a, b)] = float(np.trace(keep @ S).real)
    return probs


def inm_correlation(obs: Observable, evolution, rho0, t: float) -> float:
    probs = inm_joint_probabilities(obs, evolution, rho0, t)
    return sum(a * b * p for (a, b), p in probs.items())
