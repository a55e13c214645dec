"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`DomainError`.
The CLI maps ``DomainError`` to exit code 1 and :class:`SchemaError` to exit code 2.
"""

from __future__ import annotations


class DomainError(Exception):
    """A mathematically meaningful refusal: bad hypothesis, invariant, or input."""


class SchemaError(Exception):
    """Input could not be parsed against the expected file/argument schema."""


# p-adic arithmetic
class PrimeMismatch(DomainError):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class EvenPrime(DomainError):
    pass


class NonResidue(DomainError):
    pass


class OddValuation(DomainError):
    pass


class BranchMismatch(DomainError):
    pass


class InsufficientPrecision(DomainError):
    pass


# series
class AllZero(DomainError):
    pass


class InsufficientTail(DomainError):
    pass


class NonExactResidue(DomainError):
    pass


class NonpositiveRate(DomainError):
    pass


class WindowError(DomainError):
    pass


# metric graphs
class InvalidGraph(DomainError):
    pass


class DiscontinuousFunction(DomainError):
    pass


class SlopeMassMismatch(DomainError):
    pass


class PoleInRegion(DomainError):
    pass


class NonzeroDegree(DomainError):
    pass


# chip firing
class PreconditionNotMet(DomainError):
    pass


# curves
class BadReduction(DomainError):
    pass


class WeierstrassDisc(DomainError):
    pass


class BadDisc(DomainError):
    pass


class ZeroSeries(DomainError):
    pass


class DependentRows(DomainError):
    pass


class RankNotStabilized(DomainError):
    pass


class HypothesisFailure(DomainError):
    """Raised when a theorem's hypothesis is violated; ``hypothesis`` names it."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        msg = f"hypothesis violated: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


# bounds
class MissingParameter(DomainError):
    pass


class InvalidParameters(DomainError):
    pass
