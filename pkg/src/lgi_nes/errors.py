"""Exception and warning types raised across the package."""


class LgiNesError(Exception):
    """Base class for all package errors."""


class ParameterError(LgiNesError, ValueError):
    """Physical parameters violate a type invariant."""


class DegenerateCoupling(LgiNesError):
    """Mixing angle undefined: zero coupling and zero detuning."""


class DivergentOccupation(LgiNesError):
    """Bose occupation requested at or below the chemical potential."""


class SingularCoherenceBlock(LgiNesError):
    """Coherence block of the generator cannot be inverted."""


class NonUniqueSteadyState(LgiNesError):
    """Generator kernel is not one-dimensional."""


class RegimeMismatch(LgiNesError):
    """Perturbative closure requested outside its regime."""


class StatisticsMismatch(LgiNesError):
    """Quantity requested for the wrong bath statistics."""


class UnsupportedEvolution(LgiNesError):
    """Evolution object cannot drive the requested simulation."""


class ConfigError(LgiNesError):
    """Invalid run configuration. ``path`` names the offending field."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class PositivityWarning(UserWarning):
    """Density matrix has an eigenvalue below -1e-9."""
