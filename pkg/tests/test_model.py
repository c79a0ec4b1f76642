import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import models
from lgi_nes.errors import DegenerateCoupling, DivergentOccupation, ParameterError
from lgi_nes.model import (
    BathParams,
    SystemParams,
    build_eigenbasis,
    make_model,
    occupation,
    sigma_minus,
    sigma_z,
    system_hamiltonian,
)

BOSE_AT_T = 1 / (math.e - 1)  # 0.5819767068693265


def test_identical_qubits_maximal_mixing():
    eb = build_eigenbasis(SystemParams(1.0, 1.0, 1.0))
    assert eb.theta == pytest.approx(-math.pi / 2, abs=1e-15)
    assert eb.Omega == pytest.approx(1.0)
    # half-angle convention: |2> = cos(theta/2)|eg> + sin(theta/2)|ge>
    np.testing.assert_allclose(eb.U[:, 1], [0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0], atol=1e-15)


def test_weak_coupling_limit_picks_lower_excitation():
    eb = build_eigenbasis(SystemParams(1.5, 0.5, 1e-9))
    assert eb.theta == pytest.approx(-math.pi, abs=1e-8)
    # |2> -> |ge>, i.e. qubit 2 (the softer one) excited
    assert abs(eb.U[2, 1]) == pytest.approx(1.0, abs=1e-8)


def test_detuned_angle_and_gap():
    eb = build_eigenbasis(SystemParams(0.8, 1.2, 0.6))
    assert eb.Omega == pytest.approx(0.7211102550927979, abs=1e-14)
    assert eb.theta == pytest.approx(-0.982793723247329, abs=1e-14)


def test_degenerate_point():
    sys = SystemParams(1.0, 1.0, 0.0)
    with pytest.raises(DegenerateCoupling):
        build_eigenbasis(sys, strict=True)
    eb = build_eigenbasis(sys)
    assert eb.degenerate and eb.theta == -math.pi / 2


def test_coupling_bound():
    SystemParams(1.0, 1.0, 1.0)  # boundary lam = sqrt(omega1 omega2) is accepted
    with pytest.raises(ParameterError, match="sqrt"):
        SystemParams(1.0, 1.0, 1.0001)
    with pytest.raises(ParameterError):
        SystemParams(1.0, 1.0, -0.1)
    with pytest.raises(ParameterError):
        SystemParams(0.0, 1.0, 0.1)


def test_bath_validation():
    with pytest.raises(ParameterError):
        BathParams("bosonic", 1.0, 1.0, 0.1, 0.0)
    with pytest.raises(ParameterError):
        BathParams("fermionic", 0.0, 1.0)
    with pytest.raises(ParameterError):
        BathParams("fermionic", 1.0, 1.0, J=0.0)
    b = BathParams("fermionic", 0.5, 1.5, 0.2, 1.0)
    assert (b.delta_T, b.T_m, b.delta_mu, b.mu_m) == pytest.approx((1.0, 1.0, 0.8, 0.6))


@given(models())
def test_eigenbasis_diagonalizes(m):
    eb = m.eigenbasis
    np.testing.assert_allclose(eb.U @ eb.U.T, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(eb.U.T @ system_hamiltonian(m.system) @ eb.U, np.diag(eb.energies), atol=1e-12)
    assert -math.pi < eb.theta < 0


@given(models())
def test_observable_matrix_form(m):
    th = m.eigenbasis.theta
    Q = m.eigenbasis.U.T @ sigma_z(1) @ m.eigenbasis.U
    want = np.diag([1.0, -math.cos(th), math.cos(th), -1.0])
    want[1, 2] = want[2, 1] = math.sin(th)
    np.testing.assert_allclose(Q, want, atol=1e-12)


@given(models())
def test_transition_ops(m):
    eb, ops = m.eigenbasis, m.ops
    H = eb.hamiltonian
    for l in (1, 2):
        np.testing.assert_allclose(ops.eta(l) + ops.xi(l), eb.U.T @ sigma_minus(l) @ eb.U, atol=1e-12)
        np.testing.assert_allclose(H @ ops.eta(l) - ops.eta(l) @ H, -eb.omega1p * ops.eta(l), atol=1e-12)
        np.testing.assert_allclose(H @ ops.xi(l) - ops.xi(l) @ H, -eb.omega2p * ops.xi(l), atol=1e-12)


@given(st.floats(0.5, 2.0), st.floats(0.5, 2.0), st.floats(0.05, 0.9))
def test_swap_symmetry(w1, w2, frac):
    lam = frac * math.sqrt(w1 * w2)
    a = build_eigenbasis(SystemParams(w1, w2, lam))
    b = build_eigenbasis(SystemParams(w2, w1, lam))
    if w1 != w2:
        assert b.theta == pytest.approx(-math.pi - a.theta, abs=1e-12)
    np.testing.assert_allclose(a.energies, b.energies, atol=1e-12)


def test_occupation_values():
    assert occupation("fermionic", 0.7, 1.3, 1.3) == 0.5
    assert occupation("bosonic", 1.0, 0.0, 1.0) == pytest.approx(BOSE_AT_T, rel=1e-14)
    assert occupation("fermionic", 1e-4, 1.0, 0.9) == pytest.approx(1.0)
    assert occupation("fermionic", 1e-4, 1.0, 1.1) == pytest.approx(0.0, abs=1e-300)
    assert occupation("bosonic", 1e-4, 0.0, 1.0) == pytest.approx(0.0, abs=1e-300)
    with pytest.raises(DivergentOccupation):
        occupation("bosonic", 1.0, 1.0, 0.5)


@given(st.floats(0.05, 5.0), st.floats(-2, 2), st.floats(0.1, 3.0), st.floats(0.01, 0.5))
def test_occupation_monotone(T, mu, w, step):
    assert occupation("fermionic", T, mu + step, w) > occupation("fermionic", T, mu, w) or \
        occupation("fermionic", T, mu, w) in (0.0, 1.0)
    assert occupation("fermionic", T, mu, w + step) <= occupation("fermionic", T, mu, w)
    assert occupation("bosonic", T + step, 0.0, w) > occupation("bosonic", T, 0.0, w)


def test_rate_examples():
    # omega1' = 0.5 for omega1 = omega2 = lam = 1
    m = make_model(statistics="fermionic", T1=0.8, mu1=0.5, J=0.01)
    assert m.rates.alpha[0, 0] == pytest.approx(0.005) and m.rates.beta[0, 0] == pytest.approx(0.005)
    m = make_model(T1=1e-3, J=0.01)
    np.testing.assert_allclose(m.rates.alpha, 0.0, atol=1e-100)
    np.testing.assert_allclose(m.rates.beta, 0.01, rtol=1e-12)
    m = make_model(T1=0.5, J=0.01)
    assert m.rates.alpha[0, 0] == pytest.approx(BOSE_AT_T * 0.01, rel=1e-12)
    assert m.rates.beta[0, 0] == pytest.approx((1 + BOSE_AT_T) * 0.01, rel=1e-12)


def test_occupation_set_example():
    # theta = -pi/2 and omega1' = 0.5; pick temperatures giving n1 = 0.2, n2 = 0.6
    T1 = 0.5 / math.log(6.0)
    T2 = 0.5 / math.log(1 + 1 / 0.6)
    occ = make_model(T1=T1, T2=T2).occupations
    assert (occ.n1_w1, occ.n2_w1) == pytest.approx((0.2, 0.6), abs=1e-12)
    assert occ.tilde_n1 == pytest.approx(0.4, abs=1e-12)
    assert occ.delta_n1 == pytest.approx(-0.2, abs=1e-12)


@given(models(equilibrium=True))
def test_equilibrium_has_no_imbalance(m):
    assert m.occupations.delta_n1 == 0.0 and m.occupations.delta_n2 == 0.0


@given(st.floats(0.1, 2.0), st.floats(0.01, 2.0))
def test_hotter_bath2_gives_negative_imbalance(T1, dT):
    occ = make_model(T1=T1, T2=T1 + dT).occupations
    assert occ.delta_n1 < 0 and occ.delta_n2 < 0


@given(models(statistics="fermionic"))
def test_fermionic_occupations_bounded(m):
    occ = m.occupations
    raw = occ.raw()
    assert np.all((raw >= 0) & (raw <= 1))
    assert abs(occ.delta_n1) < 0.5 and abs(occ.delta_n2) < 0.5


@given(models(statistics="bosonic"))
def test_bosonic_rates_positive(m):
    assert np.all(m.occupations.raw() > 0)
    assert np.all(m.rates.beta > 0)
