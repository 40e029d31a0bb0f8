"""Exception hierarchy.

Errors split in two families so the command line can map them onto exit
codes: ``ValidationError`` (bad parameters, exit 2) and ``NumericalError``
(a computation that could not be completed, exit 3).
"""


class BTZError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(BTZError, ValueError):
    pass


class NumericalError(BTZError, ArithmeticError):
    pass


class InvalidParameters(ValidationError):
    pass


class NoHorizon(ValidationError):
    """J^2 > M^2 l^2: the parameters describe a naked singularity."""


class DomainError(ValidationError):
    """A radius (or span) outside the exterior region r > r_+."""


class ZeroK(ValidationError):
    """Crossing bounds requested for k = 0, where they degenerate."""


class NotExtremal(ValidationError):
    pass


class ExtremalUnsupported(ValidationError):
    """Near-horizon spectral checks are only available off extremality."""


class LadderTooShort(ValidationError):
    pass


class BracketError(NumericalError):
    pass


class StiffnessError(NumericalError):
    """The ODE integrator could not reach the requested endpoint."""

    def __init__(self, message, reach=None):
        super().__init__(message)
        self.reach = reach


class ComplexMu0(NumericalError):
    """The mu_0 radicand went negative on the quadrature path."""
