"""Exception types shared across the package."""


class SplabError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZero(SplabError, ZeroDivisionError):
    """Division by the zero element of the radical field."""


class UnsupportedDenominator(SplabError):
    """Denominator lies outside a single quadratic extension of Q."""


class RadsumParseError(SplabError, ValueError):
    """Malformed radical-sum text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GraphFormatError(SplabError, ValueError):
    """Malformed graph / instance text."""


class InsufficientPrimes(SplabError):
    """Not enough primes below the construction thresholds."""


class DiscriminantFailure(SplabError):
    """A hyperbola pair admits no two real intersection points."""


class LambdaOne(SplabError, ValueError):
    """The dilate parameter 1 makes the elimination degenerate."""


class PolyParseError(SplabError, ValueError):
    """Malformed polynomial text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PreconditionError(SplabError, ValueError):
    """A documented operation precondition was violated."""


class DomainError(SplabError):
    """No valid evaluation region exists for a numeric test."""


class SizeGuardExceeded(SplabError):
    """A brute-force count would exceed the configured size guard."""


class UnsupportedEvaluation(SplabError):
    """Evaluation required arithmetic outside the supported field ops."""
