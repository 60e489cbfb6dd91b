"""Exception hierarchy shared by every logharm module."""


class LogHarmonicError(Exception):
    """Base class for all errors raised by logharm."""


class PointOutsideRadius(LogHarmonicError, ValueError):
    """A point lies outside the disc on which a series is trusted."""


class SingularLeadingCoefficient(LogHarmonicError, ZeroDivisionError):
    """Division by a series whose constant term is (numerically) zero."""


class BranchAmbiguity(LogHarmonicError, ValueError):
    """The principal logarithm of a series is not well defined."""


class SingularityDetected(LogHarmonicError, ArithmeticError):
    """h or g (hence f) vanishes at an evaluation point."""


class OriginSingularity(LogHarmonicError, ArithmeticError):
    """A derivative-based quantity was requested at z = 0."""


class DegenerateDenominator(LogHarmonicError, ArithmeticError):
    """A denominator such as 1 - psi or 1 + beta + z h'/h came too close to 0."""


class NotSchwarz(LogHarmonicError, ValueError):
    """A candidate series failed the Schwarz function test.

    The measured witness (if any) is attached as ``witness`` so callers can
    still inspect ``max_ratio``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AlphaOutOfRange(LogHarmonicError, ValueError):
    """The order alpha is outside the range a check is valid for."""


class SpecParseError(LogHarmonicError, ValueError):
    """A map spec or map file is malformed; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
