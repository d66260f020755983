"""Exception hierarchy shared by all modules."""


class FracSeriesError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FracSeriesError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(DomainError):
    """A gamma-type function was evaluated at one of its poles."""


class GammaOverflowError(FracSeriesError, OverflowError):
    """The result does not fit in a double."""


class ConvergenceError(FracSeriesError, ArithmeticError):
    """A series failed to meet its stopping rule within the term cap."""


class DivergenceError(DomainError):
    """The evaluation point lies outside the disk of convergence."""


class NonAnalyticError(DomainError):
    """Derivatives were requested from a function that has none at that point."""


class EstimationError(FracSeriesError):
    """A numerical estimate (e.g. a ratio test) is not trustworthy."""


class SegmentLookupError(DomainError):
    """No order segment covers the requested time."""


class UnsupportedError(FracSeriesError):
    """The combination of operator, function and method is not implemented."""


class RegimeError(FracSeriesError):
    """No asymptotic regime applies to the given (a, t) pair."""


class RootNotFoundError(FracSeriesError):
    """A sign change could not be bracketed."""


class QuadratureError(FracSeriesError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance.

    ``estimate`` and ``error`` hold the best value obtained.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DifferencingError(QuadratureError):
    """Richardson-extrapolated finite differences disagree beyond tolerance."""


class ParseError(FracSeriesError, ValueError):
    """A function expression could not be parsed."""

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position
