import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lgi_nes.model import make_model

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def models(draw, statistics=None, equilibrium=None, symmetric=False):
    """Random valid models; ``symmetric`` forces omega1 == omega2."""
    stat = statistics or draw(st.sampled_from(["bosonic", "fermionic"]))
    w1 = draw(st.floats(0.5, 2.0))
    w2 = w1 if symmetric else draw(st.floats(0.5, 2.0))
    lam = draw(st.floats(0.05, 0.95)) * math.sqrt(w1 * w2)
    T1 = draw(st.floats(0.1, 3.0))
    eq = draw(st.booleans()) if equilibrium is None else equilibrium
    T2 = T1 if eq else draw(st.floats(0.1, 3.0))
    J = 10 ** draw(st.floats(-3, -1))
    if stat == "bosonic":
        return make_model(w1, w2, lam, stat, T1, T2, J=J)
    mu1 = draw(st.floats(-1.0, 2.0))
    mu2 = mu1 if eq else draw(st.floats(-1.0, 2.0))
    return make_model(w1, w2, lam, stat, T1, T2, mu1, mu2, J=J)


@st.composite
def density_matrices(draw, dim=4):
    """Random Hermitian PSD matrices with unit trace."""
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def fig3_bosonic():
    return make_model(1.0, 1.0, 1.0, "bosonic", 1.5, 1.5, J=0.005)


@pytest.fixture
def fig3_fermionic():
    return make_model(1.0, 1.0, 1.0, "fermionic", 1.5, 1.5, 1.0, 1.0, J=0.005)
