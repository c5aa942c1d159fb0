"""Exception hierarchy shared by every module of the package."""


class SpecDimError(Exception):
    """Base class for all errors raised by the package."""


class UnsupportedRank(SpecDimError, ValueError):
    """Rank outside the range a root system or family supports."""


class NotDominant(SpecDimError, ValueError):
    """Weight fails the dominance conditions of its root system."""


class NonIntegerResult(SpecDimError, ArithmeticError):
    """Weyl product did not reduce to an integer (internal bug)."""


class RankMismatch(SpecDimError, ValueError):
    """Weights passed to a branching check have incompatible lengths."""


class RankLimit(SpecDimError, ValueError):
    """Rank above the documented limit of the Brauer-Klimyk oracle."""


class CutoffTooLarge(SpecDimError, ValueError):
    """Requested truncation exceeds the configured memory budget."""


class NotARoot(SpecDimError, ValueError):
    """Vertex does not reach every vertex of the truncated growth graph."""


class NotPolynomial(SpecDimError, ArithmeticError):
    """Interpolated shell polynomial failed validation on held-out shells."""


class InsufficientData(SpecDimError, ValueError):
    """Not enough shells in the fitting window."""


class CertificateIncomplete(SpecDimError):
    """At least one sub-check of a dimension certificate failed."""

    def __init__(self, message: str, failed_checks: list) -> None:
        super().__init__(message)
        self.failed_checks = failed_checks


class ConventionUnset(SpecDimError, ValueError):
    """Convention record for the conjugate-variable action is incomplete."""


class RatioBoundViolated(SpecDimError, AssertionError):
    """Norm ratio exceeded the bound 1/|h(x0)|."""
