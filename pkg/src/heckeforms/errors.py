"""Exception types shared across the package."""


class HeckeError(Exception):
    """Base class for every error this package raises deliberately."""


class UsageError(HeckeError):
    """Bad configuration or argument, e.g. p out of range."""


class ParseError(HeckeError):
    """Malformed input text; carries the offending position when known."""

    def __init__(self, message, position=None):
        self.base_message = message
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)
        self.position = position


class DomainError(HeckeError):
    """Input is well-formed but outside the operation's mathematical domain."""


class SquareRadicandError(DomainError):
    """The radicand is a square in Q(lambda_p), so the surd is not irrational."""


class IncompatibleRadicandError(DomainError):
    """Comparison requested between surds over unrelated radicands."""


class EllipticElementError(DomainError):
    """Fixed points of an elliptic element are not real."""


class IdentityElementError(DomainError):
    """Fixed points of +/-I are undefined (every point is fixed)."""


class NonPeriodicError(DomainError):
    """Continued-fraction expansion did not close within the step budget."""


class NonHyperbolicError(DomainError):
    """A hyperbolic element/form/period was required."""


class RootChoiceError(DomainError):
    """Periodic evaluation's fixed-point choice failed its re-expansion check."""


class NonClosingOrbitError(DomainError):
    """Phi_p orbit did not return to its starting point."""


class ConsistencyError(HeckeError):
    """Two independent characterizations disagreed; indicates a bug, not bad input."""
