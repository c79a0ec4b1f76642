"""Physical parameters, the coupled-qubit eigenbasis, transition operators and
bath occupations.

Units are hbar = k_B = 1. The local product basis is ordered
(|gg>, |eg>, |ge>, |ee>) with the first letter referring to qubit 1; every
module indexes local matrices through ``LOCAL_BASIS``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit

from .errors import DegenerateCoupling, DivergentOccupation, ParameterError

LOCAL_BASIS = ("gg", "eg", "ge", "ee")
_GG, _EG, _GE, _EE = range(4)

# relative slack when comparing the coupling against its upper bound
_BOUND_RTOL = 1e-12


class Statistics(str, Enum):
    BOSONIC = "bosonic"
    FERMIONIC = "fermionic"


@dataclass(frozen=True)
class SystemParams:
    """Qubit frequencies and inter-qubit coupling.

    The coupling must satisfy 0 <= lam <= sqrt(omega1 * omega2).
    """

    omega1: float
    omega2: float
    lam: float

    def __post_init__(self):
        if not (self.omega1 > 0 and self.omega2 > 0):
            raise ParameterError(f"qubit frequencies must be positive, got {self.omega1}, {self.omega2}")
        if not self.lam >= 0:
            raise ParameterError(f"coupling must be non-negative, got {self.lam}")
        bound = math.sqrt(self.omega1 * self.omega2)
        if self.lam > bound * (1 + _BOUND_RTOL):
            raise ParameterError(
                f"coupling {self.lam} exceeds sqrt(omega1*omega2) = {bound}; "
                "outside the weak-coupling regime"
            )

    @property
    def omega_bar(self):
        return 0.5 * (self.omega1 + self.omega2)

    @property
    def delta_omega(self):
        return self.omega1 - self.omega2


@dataclass(frozen=True)
class BathParams:
    """Temperatures, chemical potentials and flat coupling constant of the two baths."""

    statistics: Statistics
    T1: float
    T2: float
    mu1: float = 0.0
    mu2: float = 0.0
    J: float = 0.005

    def __post_init__(self):
        object.__setattr__(self, "statistics", Statistics(self.statistics))
        if not (self.T1 > 0 and self.T2 > 0):
            raise ParameterError(f"temperatures must be positive, got {self.T1}, {self.T2}")
        if not self.J > 0:
            raise ParameterError(f"coupling constant J must be positive, got {self.J}")
        if self.statistics is Statistics.BOSONIC and (self.mu1 != 0 or self.mu2 != 0):
            raise ParameterError("bosonic baths require mu1 = mu2 = 0")

    @property
    def delta_T(self):
        return self.T2 - self.T1

    @property
    def T_m(self):
        return 0.5 * (self.T1 + self.T2)

    @property
    def delta_mu(self):
        return self.mu2 - self.mu1

    @property
    def mu_m(self):
        return 0.5 * (self.mu1 + self.mu2)

    @property
    def is_equilibrium(self):
        return self.T1 == self.T2 and self.mu1 == self.mu2


@dataclass(frozen=True)
class Eigenbasis:
    """Spectrum of the coupled qubits.

    ``U`` holds the eigenstates |1>..|4> as columns in the local basis.
    ``degenerate`` is set when the mixing angle was fixed by continuity.
    """

    theta: float
    Omega: float
    energies: np.ndarray
    U: np.ndarray
    degenerate: bool = False

    @property
    def omega1p(self):
        return float(self.energies[1])

    @property
    def omega2p(self):
        return float(self.energies[2])

    @property
    def hamiltonian(self):
        return np.diag(self.energies).astype(float)


def mixing_angle(delta_omega, lam):
    """Branch-resolved mixing angle in (-pi, 0]."""
    if delta_omega == 0:
        return -0.5 * math.pi
    if delta_omega < 0:
        return math.atan(lam / delta_omega)
    return math.atan(lam / delta_omega) - math.pi


def build_eigenbasis(sys: SystemParams, strict: bool = False) -> Eigenbasis:
    """Diagonalize the system Hamiltonian in closed form.

    With lam = 0 and equal frequencies the angle is 0/0. By default it is set
    to -pi/2 (the symmetric limit) and ``degenerate`` is flagged; with
    ``strict=True`` a DegenerateCoupling is raised instead.
    """
    dw = sys.delta_omega
    degenerate = sys.lam == 0 and dw == 0
    if degenerate and strict:
        raise DegenerateCoupling("lam = 0 and omega1 = omega2: mixing angle undefined")
    theta = mixing_angle(dw, sys.lam)
    Omega = math.hypot(dw, sys.lam)
    wb = sys.omega_bar
    energies = np.array([0.0, wb - Omega / 2, wb + Omega / 2, sys.omega1 + sys.omega2])
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    U = np.zeros((4, 4))
    U[_GG, 0] = 1.0
    U[_EG, 1], U[_GE, 1] = c, s
    U[_EG, 2], U[_GE, 2] = -s, c
    U[_EE, 3] = 1.0
    return Eigenbasis(theta, Omega, energies, U, degenerate)


def system_hamiltonian(sys: SystemParams) -> np.ndarray:
    """System Hamiltonian in the local basis."""
    H = np.diag([0.0, sys.omega1, sys.omega2, sys.omega1 + sys.omega2])
    H[_EG, _GE] = H[_GE, _EG] = 0.5 * sys.lam
    return H


def sigma_minus(qubit: int) -> np.ndarray:
    """Lowering operator of qubit 1 or 2 in the local basis."""
    op = np.zeros((4, 4))
    if qubit == 1:
        op[_GG, _EG] = op[_GE, _EE] = 1.0
    elif qubit == 2:
        op[_GG, _GE] = op[_EG, _EE] = 1.0
    else:
        raise ValueError(f"qubit must be 1 or 2, got {qubit}")
    return op


def sigma_z(qubit: int) -> np.ndarray:
    """Pauli z of one qubit in the local basis, with |g> the +1 eigenstate."""
    if qubit == 1:
        return np.diag([1.0, -1.0, 1.0, -1.0])
    if qubit == 2:
        return np.diag([1.0, 1.0, -1.0, -1.0])
    raise ValueError(f"qubit must be 1 or 2, got {qubit}")


def number_operator() -> np.ndarray:
    """Excitation number in the energy basis."""
    return np.diag([0.0, 1.0, 1.0, 2.0])


# energy-basis positions of transitions across the lower and upper gap
_LOWER_GAP = ((0, 1), (2, 3))
_UPPER_GAP = ((0, 2), (1, 3))


@dataclass(frozen=True)
class TransitionOps:
    """Energy-basis lowering operators split by the gap they bridge.

    ``eta[l]`` lowers by omega1', ``xi[l]`` by omega2'; sigma_l^- = eta_l + xi_l.
    """

    eta1: np.ndarray
    eta2: np.ndarray
    xi1: np.ndarray
    xi2: np.ndarray

    def eta(self, l):
        return self.eta1 if l == 1 else self.eta2

    def xi(self, l):
        return self.xi1 if l == 1 else self.xi2


def build_transition_ops(eb: Eigenbasis) -> TransitionOps:
    """Rotate each qubit's lowering operator into the energy basis and split it."""
    parts = []
    for l in (1, 2):
        S = eb.U.T @ sigma_minus(l) @ eb.U
        eta, xi = np.zeros((4, 4)), np.zeros((4, 4))
        for a, b in _LOWER_GAP:
            eta[a, b] = S[a, b]
        for a, b in _UPPER_GAP:
            xi[a, b] = S[a, b]
        parts.append((eta, xi))
    (eta1, xi1), (eta2, xi2) = parts
    return TransitionOps(eta1, eta2, xi1, xi2)


def occupation(statistics, T: float, mu: float, omega: float) -> float:
    """Bose-Einstein or Fermi-Dirac occupation at frequency ``omega``."""
    statistics = Statistics(statistics)
    if not T > 0:
        raise ParameterError(f"temperature must be positive, got {T}")
    x = (omega - mu) / T
    if statistics is Statistics.BOSONIC:
        if omega <= mu:
            raise DivergentOccupation(f"Bose occupation diverges for omega={omega} <= mu={mu}")
        if x > 700:
            return math.exp(-x)
        return 1.0 / math.expm1(x)
    return float(expit(-x))


@dataclass(frozen=True)
class OccupationSet:
    n1_w1: float
    n1_w2: float
    n2_w1: float
    n2_w2: float
    tilde_n1: float
    tilde_n2: float
    delta_n1: float
    delta_n2: float

    def raw(self):
        """Occupations as a 2x2 array indexed [bath, frequency]."""
        return np.array([[self.n1_w1, self.n1_w2], [self.n2_w1, self.n2_w2]])


def occupation_set(bath: BathParams, eb: Eigenbasis) -> OccupationSet:
    w1, w2 = eb.omega1p, eb.omega2p
    n = [[occupation(bath.statistics, T, mu, w) for w in (w1, w2)]
         for T, mu in ((bath.T1, bath.mu1), (bath.T2, bath.mu2))]
    c2 = math.cos(eb.theta / 2) ** 2
    s2 = math.sin(eb.theta / 2) ** 2
    half_sin = 0.5 * math.sin(eb.theta)
    return OccupationSet(
        n1_w1=n[0][0], n1_w2=n[0][1], n2_w1=n[1][0], n2_w2=n[1][1],
        tilde_n1=c2 * n[0][0] + s2 * n[1][0],
        tilde_n2=s2 * n[0][1] + c2 * n[1][1],
        delta_n1=half_sin * (n[1][0] - n[0][0]),
        delta_n2=half_sin * (n[1][1] - n[0][1]),
    )


@dataclass(frozen=True)
class RateCoefficients:
    """Absorption (alpha) and emission (beta) rates indexed [bath, frequency]."""

    alpha: np.ndarray
    beta: np.ndarray


def rate_coefficients(bath: BathParams, eb: Eigenbasis, occ: OccupationSet | None = None) -> RateCoefficients:
    if occ is None:
        occ = occupation_set(bath, eb)
    n = occ.raw()
    sign = 1.0 if bath.statistics is Statistics.BOSONIC else -1.0
    return RateCoefficients(alpha=bath.J * n, beta=bath.J * (1.0 + sign * n))


@dataclass(frozen=True)
class Model:
    """Everything derived from one parameter point."""

    system: SystemParams
    bath: BathParams
    eigenbasis: Eigenbasis
    ops: TransitionOps
    occupations: OccupationSet
    rates: RateCoefficients

    @classmethod
    def build(cls, system: SystemParams, bath: BathParams, strict: bool = False) -> "Model":
        eb = build_eigenbasis(system, strict=strict)
        occ = occupation_set(bath, eb)
        return cls(system, bath, eb, build_transition_ops(eb), occ, rate_coefficients(bath, eb, occ))

    @property
    def statistics(self):
        return self.bath.statistics

    @property
    def trust_scale(self):
        """J times the largest raw occupation; multiply by t for the trust score."""
        return self.bath.J * float(np.max(self.occupations.raw()))


def make_model(omega1=1.0, omega2=1.0, lam=1.0, statistics="bosonic", T1=1.0, T2=None,
               mu1=0.0, mu2=None, J=0.005, strict=False) -> Model:
    """Shorthand constructor; T2 and mu2 default to the bath-1 values."""
    system = SystemParams(omega1, omega2, lam)
    bath = BathParams(statistics, T1, T1 if T2 is None else T2, mu1, mu1 if mu2 is None else mu2, J)
    return Model.build(system, bath, strict=strict)
