"""Error types raised by the gbds_lab library.

Every error derives from :class:`GbdsError` (itself a ``ValueError``) so the
command line front end can report user mistakes without a stack trace.
Witness values are kept as attributes for tests and reports.
"""

from __future__ import annotations

from typing import Any, Optional


class GbdsError(ValueError):
    """Base class for every domain error."""


class ClosureViolation(GbdsError):
    def __init__(self, op: str, left: Any, right: Any, rendered: Optional[str] = None):
        self.op = op
        self.left = left
        self.right = right
        super().__init__(rendered or f"family not closed under {op} for {left!r}, {right!r}")


class MissingEmptySet(GbdsError):
    def __init__(self):
        super().__init__("the empty set is not a member of the family")


class NotAMember(GbdsError):
    def __init__(self, member: Any, rendered: Optional[str] = None):
        self.member = member
        super().__init__(f"not a member of the algebra: {rendered or member!r}")


class UnknownVertex(GbdsError):
    def __init__(self, vertex: str):
        self.vertex = vertex
        super().__init__(f"unknown vertex: {vertex!r}")


class ForeignIdeal(GbdsError):
    def __init__(self):
        super().__init__("ideal belongs to a different algebra")


class MixedAlgebras(GbdsError):
    def __init__(self, member: Any = None):
        self.member = member
        super().__init__(f"terms come from different algebras (offending member {member!r})")


class BadMorphism(GbdsError):
    def __init__(self, letter: Optional[str], law: str, left: Any, right: Any, rendered: str = ""):
        self.letter = letter
        self.law = law
        self.left = left
        self.right = right
        where = f" for letter {letter!r}" if letter is not None else ""
        super().__init__(f"morphism law {law!r} fails{where}: {rendered or (left, right)}")


class IdealTooSmall(GbdsError):
    def __init__(self, letter: str, witness: int, rendered: str = ""):
        self.letter = letter
        self.witness = witness
        super().__init__(f"F_{letter} is not contained in I_{letter}; witness {rendered or witness}")


class JNotRegular(GbdsError):
    def __init__(self, witness: int, rendered: str = ""):
        self.witness = witness
        super().__init__(f"relative ideal contains a non-regular set: {rendered or witness}")


class UnknownLetter(GbdsError):
    def __init__(self, letter: str):
        self.letter = letter
        super().__init__(f"unknown letter: {letter!r}")


class InvalidElement(GbdsError):
    pass


class NotIdempotent(GbdsError):
    pass


class ZeroUngraded(GbdsError):
    def __init__(self):
        super().__init__("the zero element has no grade")


class NotInDomain(GbdsError):
    pass


class NotInIdeal(GbdsError):
    def __init__(self, letter: str, member: Any, rendered: str = ""):
        self.letter = letter
        self.member = member
        super().__init__(f"{rendered or member!r} is not in the ideal of {letter!r}")


class MixedSystems(GbdsError):
    def __init__(self):
        super().__init__("operands belong to different systems or rings")


class RelativeSystemUnsupported(GbdsError):
    def __init__(self, operation: str):
        self.operation = operation
        super().__init__(f"{operation} requires a non-relative system (J = B_reg)")


class NotEquivalent(GbdsError):
    def __init__(self, left: int, right: int, rendered: str = ""):
        self.left = left
        self.right = right
        super().__init__(f"sets are not equivalent modulo the regular ideal: {rendered or (left, right)}")


class BoundTooSmall(GbdsError):
    def __init__(self, bound: int, needed: int):
        self.bound = bound
        self.needed = needed
        super().__init__(f"bound {bound} cannot reach the required witnesses (need at least {needed})")


class UnknownLabel(GbdsError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"unknown label: {label!r}")


class ValidationFailure(GbdsError):
    def __init__(self, kind: str, witness: Any, rendered: str = ""):
        self.kind = kind
        self.witness = witness
        super().__init__(f"labelled space is not {kind}: {rendered or witness!r}")


class ParseError(GbdsError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


__all__ = [
    "GbdsError",
    "ClosureViolation",
    "MissingEmptySet",
    "NotAMember",
    "UnknownVertex",
    "ForeignIdeal",
    "MixedAlgebras",
    "BadMorphism",
    "IdealTooSmall",
    "JNotRegular",
    "UnknownLetter",
    "InvalidElement",
    "NotIdempotent",
    "ZeroUngraded",
    "NotInDomain",
    "NotInIdeal",
    "MixedSystems",
    "RelativeSystemUnsupported",
    "NotEquivalent",
    "BoundTooSmall",
    "UnknownLabel",
    "ValidationFailure",
    "ParseError",
]
