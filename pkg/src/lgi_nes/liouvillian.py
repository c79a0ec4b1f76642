"""Bloch-Redfield generator: operator dissipators, the 16-dim Liouvillian and
the closed-form 6-dim population/coherence block.

Vectorization is row-major: the matrix element rho[a, b] sits at index 4*a + b.
The 6-dim block is ordered (rho11, rho22, rho33, rho44, rho23, rho32).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import PositivityWarning
from .model import Model

BLOCK_INDEX = ((0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1))
BLOCK_FLAT = tuple(4 * a + b for a, b in BLOCK_INDEX)
POP = slice(0, 4)
COH = slice(4, 6)
POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class LiouvilleState:
    """Six-component density vector with a 4x4 matrix view."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex).reshape(6)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_matrix(cls, rho) -> "LiouvilleState":
        rho = np.asarray(rho)
        return cls(np.array([rho[a, b] for a, b in BLOCK_INDEX], dtype=complex))

    @classmethod
    def from_populations(cls, p, rho23=0.0) -> "LiouvilleState":
        return cls(np.array([*p, rho23, np.conj(rho23)], dtype=complex))

    @property
    def full(self) -> np.ndarray:
        rho = np.zeros((4, 4), dtype=complex)
        for k, (a, b) in enumerate(BLOCK_INDEX):
            rho[a, b] = self.v[k]
        return rho

    @property
    def populations(self) -> np.ndarray:
        return self.v[POP].real.copy()

    @property
    def rho23(self) -> complex:
        return complex(self.v[4])

    @property
    def trace(self) -> float:
        return float(self.v[POP].real.sum())

    def min_eigenvalue(self) -> float:
        rho = self.full
        return float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())

    def check_positivity(self, tol=POSITIVITY_TOL, warn=True) -> bool:
        """True if the matrix view is PSD within ``tol``; warns otherwise."""
        lo = self.min_eigenvalue()
        if lo < -tol:
            if warn:
                warnings.warn(f"density matrix has eigenvalue {lo:.3e}", PositivityWarning, stacklevel=2)
            return False
        return True


@dataclass(frozen=True)
class Generator:
    """Block generator ``M`` acting on LiouvilleState vectors.

    ``M0`` is the coherent part (imaginary entries), ``MJ`` the bath part.
    """

    M: np.ndarray
    secular: bool = False
    full16: np.ndarray | None = None

    @property
    def M0(self) -> np.ndarray:
        return 1j * self.M.imag

    @property
    def MJ(self) -> np.ndarray:
        return self.M.real.copy()

    @property
    def pp(self):
        return self.M[POP, POP]

    @property
    def pc(self):
        return self.M[POP, COH]

    @property
    def cp(self):
        return self.M[COH, POP]

    @property
    def cc(self):
        return self.M[COH, COH]


def _dissipator_one_sided(model: Model, l: int, rho: np.ndarray) -> np.ndarray:
    # the part before "+ h.c."; the operators are real so dagger is transpose
    eta, xi = model.ops.eta(l), model.ops.xi(l)
    a1, a2 = model.rates.alpha[l - 1]
    b1, b2 = model.rates.beta[l - 1]
    etad, xid = eta.T, xi.T
    return (
        a1 * (etad @ rho @ eta + etad @ rho @ xi - eta @ etad @ rho - xi @ etad @ rho)
        + a2 * (xid @ rho @ xi + etad @ rho @ xi - xi @ xid @ rho - eta @ xid @ rho)
        + b1 * (eta @ rho @ etad + eta @ rho @ xid - etad @ eta @ rho - xid @ eta @ rho)
        + b2 * (xi @ rho @ xid + eta @ rho @ xid - xid @ xi @ rho - etad @ xi @ rho)
    )


def dissipator_apply(l: int, rho, model: Model) -> np.ndarray:
    """Bath-``l`` dissipator, cross terms included.

    The Hermitian-conjugate half is applied to the operators only, so the map
    stays linear and can act on non-Hermitian matrix units.
    """
    rho = np.asarray(rho, dtype=complex)
    return _dissipator_one_sided(model, l, rho) + _dissipator_one_sided(model, l, rho.conj().T).conj().T


def coherent_apply(rho, model: Model) -> np.ndarray:
    H = model.eigenbasis.hamiltonian
    rho = np.asarray(rho, dtype=complex)
    return 1j * (rho @ H - H @ rho)


def liouvillian_apply(rho, model: Model) -> np.ndarray:
    return coherent_apply(rho, model) + dissipator_apply(1, rho, model) + dissipator_apply(2, rho, model)


def build_full_liouvillian(model: Model) -> np.ndarray:
    """16x16 matrix whose column k is the vectorized image of matrix unit k."""
    L = np.zeros((16, 16), dtype=complex)
    for k in range(16):
        E = np.zeros((4, 4), dtype=complex)
        E.flat[k] = 1.0
        L[:, k] = liouvillian_apply(E, model).reshape(16)
    return L


def project_block(L16: np.ndarray) -> np.ndarray:
    """Restrict a 16x16 Liouvillian to the population/coherence block."""
    idx = np.array(BLOCK_FLAT)
    return L16[np.ix_(idx, idx)]


def build_block_generator(model: Model, secular: bool = False, with_full: bool = False) -> Generator:
    """Closed-form 6x6 generator.

    ``secular`` zeroes all population-coherence couplings (Lindblad limit).
    """
    th = model.eigenbasis.theta
    c2 = math.cos(th / 2) ** 2
    s2 = math.sin(th / 2) ** 2
    sn = math.sin(th)
    al, be = model.rates.alpha, model.rates.beta

    def a(l, k):
        return al[l - 1, k - 1]

    def b(l, k):
        return be[l - 1, k - 1]

    M = np.zeros((6, 6), dtype=complex)
    M[0, 0] = -2 * (c2 * (a(1, 1) + a(2, 2)) + s2 * (a(1, 2) + a(2, 1)))
    M[0, 1] = M[2, 3] = 2 * (c2 * b(1, 1) + s2 * b(2, 1))
    M[0, 2] = M[1, 3] = 2 * (s2 * b(1, 2) + c2 * b(2, 2))
    M[1, 0] = M[3, 2] = 2 * (c2 * a(1, 1) + s2 * a(2, 1))
    M[1, 1] = -2 * (c2 * (b(1, 1) + a(2, 2)) + s2 * (a(1, 2) + b(2, 1)))
    M[2, 0] = M[3, 1] = 2 * (s2 * a(1, 2) + c2 * a(2, 2))
    M[2, 2] = -2 * (c2 * (a(1, 1) + b(2, 2)) + s2 * (a(2, 1) + b(1, 2)))
    M[3, 3] = -2 * (c2 * (b(1, 1) + b(2, 2)) + s2 * (b(1, 2) + b(2, 1)))

    if not secular:
        x = 0.5 * sn * (b(2, 1) + b(2, 2) - b(1, 1) - b(1, 2))
        M[0, 4] = M[0, 5] = x
        M[4, 3] = M[5, 3] = -x
        x = 0.5 * sn * (a(2, 1) + b(1, 2) - a(1, 1) - b(2, 2))
        M[1, 4] = M[1, 5] = M[4, 2] = M[5, 2] = x
        x = 0.5 * sn * (b(1, 1) + a(2, 2) - a(1, 2) - b(2, 1))
        M[2, 4] = M[2, 5] = M[4, 1] = M[5, 1] = x
        x = 0.5 * sn * (a(1, 1) + a(1, 2) - a(2, 1) - a(2, 2))
        M[3, 4] = M[3, 5] = x
        M[4, 0] = M[5, 0] = -x

    damp = c2 * (a(1, 1) + a(2, 2) + b(1, 1) + b(2, 2)) + s2 * (a(2, 1) + a(1, 2) + b(2, 1) + b(1, 2))
    Om = model.eigenbasis.Omega
    M[4, 4] = 1j * Om - damp
    M[5, 5] = -1j * Om - damp
    full = build_full_liouvillian(model) if with_full else None
    return Generator(M, secular, full)
