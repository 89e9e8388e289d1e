"""Exception hierarchy shared by every calculus."""

from __future__ import annotations


class NbeError(Exception):
    """Base class for all errors raised by the library."""


class ContextMismatch(NbeError):
    pass


class IndexOutOfRange(NbeError):
    pass


class TypeMismatch(NbeError):
    pass


class UnboundVariable(NbeError):
    pass


class BranchTypeDisagreement(TypeMismatch):
    pass


class PolarityViolation(NbeError):
    pass


class ShapeMismatch(NbeError):
    """A semantic value does not have the shape its type dictates."""


class InvalidNormalForm(NbeError):
    """Raised by the grammar validators."""


class DomainTooLarge(NbeError):
    pass


class GenerationExhausted(NbeError):
    pass


class ElaborationError(NbeError):
    pass


class NonExhaustivePatterns(ElaborationError):
    pass


class OverlappingPatterns(ElaborationError):
    pass


class NonAtomicVarPattern(ElaborationError):
    pass


class ParseError(NbeError):
    def __init__(self, message: str, line: int = 0, column: int = 0, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        loc = f"{line}:{column}: " if line else ""
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(loc + message)
