"""Exception hierarchy shared by every module.

The CLI maps :class:`ConfigError` to exit status 2 and every other
:class:`GammaSumError` to exit status 3.
"""


class GammaSumError(Exception):
    """Base class for all library errors."""


class ConfigError(GammaSumError, ValueError):
    """Malformed user input (weights, grids, suite names, ...)."""


class DomainError(GammaSumError, ValueError):
    """Argument outside the mathematical domain of a function."""


class PreconditionError(GammaSumError, ValueError):
    """An operation was called outside its documented contract."""


class IntegrabilityError(PreconditionError):
    """The characteristic function is not absolutely integrable."""


class RegimeError(PreconditionError):
    """The requested quantity is infinite or undefined for this model."""


class NonConvergenceError(GammaSumError, ArithmeticError):
    """A numerical routine failed to reach its tolerance."""


class DivergenceError(GammaSumError, ArithmeticError):
    """The requested integral diverges.

    ``value`` carries the limiting value (``+inf`` or ``-inf``) when it is
    meaningful, so callers can treat the divergence as a result.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class NaNIntegrandError(NonConvergenceError):
    """An integrand returned NaN."""


class MomentOverflowError(GammaSumError, OverflowError):
    """Moment order beyond what fixed precision can represent."""
