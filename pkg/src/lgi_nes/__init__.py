"""Leggett-Garg tests for two coupled qubits between equilibrium or nonequilibrium baths."""
from .errors import (
    ConfigError,
    DegenerateCoupling,
    DivergentOccupation,
    LgiNesError,
    NonUniqueSteadyState,
    ParameterError,
    PositivityWarning,
    RegimeMismatch,
    SingularCoherenceBlock,
    StatisticsMismatch,
    UnsupportedEvolution,
)
from .model import BathParams, Model, Statistics, SystemParams, build_eigenbasis, make_model
from .liouvillian import Generator, LiouvilleState, build_block_generator, build_full_liouvillian
from .steadystate import (
    SteadyState,
    steady_state_closed_form,
    steady_state_nullspace,
    steady_state_population_matrix,
)
from .dynamics import mlgi_approximations, perturbative_lgi, propagate, propagator, regime_of
from .lgi import correlation, inm_correlation, lgi_functions, mlgi, qubit1_observable
from .thermo import currents, entropy_production, heat_current, particle_current

__all__ = [
    "BathParams", "ConfigError", "DegenerateCoupling", "DivergentOccupation", "Generator", "LgiNesError",
    "LiouvilleState", "Model", "NonUniqueSteadyState", "ParameterError", "PositivityWarning", "RegimeMismatch",
    "SingularCoherenceBlock", "Statistics", "StatisticsMismatch", "SteadyState", "SystemParams",
    "UnsupportedEvolution", "build_block_generator", "build_eigenbasis", "build_full_liouvillian", "correlation",
    "currents", "entropy_production", "heat_current", "inm_correlation", "lgi_functions", "make_model", "mlgi",
    "mlgi_approximations", "particle_current", "perturbative_lgi", "propagate", "propagator", "qubit1_observable",
    "regime_of", "steady_state_closed_form", "steady_state_nullspace", "steady_state_population_matrix",
]
