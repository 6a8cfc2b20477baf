"""Exception hierarchy shared by every module.

All domain errors derive from :class:`DomainError` so the command line can
map them to exit code 1 in one place.
"""


class DomainError(Exception):
    """Base class for invalid-input and invariant-violation errors."""


class MalformedPD(DomainError):
    pass


class InconsistentEdges(DomainError):
    pass


class NonOrientable(DomainError):
    pass


class LengthMismatch(DomainError):
    pass


class EmbeddingFailure(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class SameComponent(DomainError):
    pass


class InvalidArc(DomainError):
    pass


class NotASignAssignment(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class NotDiagonalizable(DomainError):
    pass


class IncompatiblePair(DomainError):
    pass


class NotCancellable(DomainError):
    pass


class GradingMismatch(DomainError):
    pass


class NotOppositePair(DomainError):
    pass


class Stuck(DomainError):
    pass


class NotAComplex(DomainError):
    pass


class NotACycle(DomainError):
    pass


class NotAKnot(DomainError):
    pass


class InvalidSite(DomainError):
    pass


class NonComposable(DomainError):
    pass


class NotConnectedCobordism(DomainError):
    pass


class NotAChainMap(DomainError):
    pass


class MalformedScript(DomainError):
    """A move script line that cannot be parsed or names an unknown object."""
