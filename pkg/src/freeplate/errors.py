"""Exception hierarchy for the free-plate solver."""


class FreePlateError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FreePlateError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedRangeError(DomainError):
    """A parameter combination the implementation deliberately refuses."""


class SeriesBudgetError(FreePlateError):
    """The ascending series exceeded its argument or term budget."""


class BracketError(FreePlateError):
    """A proven sign bracket failed to bracket; indicates a kernel bug."""


class InvariantViolationError(FreePlateError):
    """A cross-check guaranteed by theory failed at runtime."""


class QuadratureConvergenceError(FreePlateError):
    """Quadrature refinement did not stabilize to the required tolerance."""


class TensionMismatchError(DomainError):
    """Mode parameters do not match the target problem's tension."""
