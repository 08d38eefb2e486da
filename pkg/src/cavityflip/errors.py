"""Exception types raised by cavityflip."""


class CavityFlipError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(CavityFlipError, ValueError):
    """A rate, factor or drive value violates its admissible range."""


class DegenerateParameterError(InvalidParameterError):
    """The requested quantity is undefined for these parameters (e.g. beta = 0)."""


class DegenerateResponseError(CavityFlipError, ArithmeticError):
    """The reflected field vanishes, so its phase carries no information."""


class ZeroInputError(DegenerateResponseError):
    """Phase requested for a zero input amplitude."""


class StepInstabilityError(CavityFlipError, ArithmeticError):
    """Step-halving estimate exceeded its bound; use a smaller time step."""


class ConvergenceError(CavityFlipError, RuntimeError):
    """An iterative procedure hit its horizon before meeting its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TruncationError(ConvergenceError):
    """Fock-space truncation too small: the top level is populated."""


class SolverError(ConvergenceError):
    """Steady-state linear solve was singular or left a large residual."""


class ConfigError(CavityFlipError, ValueError):
    """Run configuration could not be parsed or validated."""
