"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NNPError(Exception):
    """Base class for all engine errors."""


class ParseError(NNPError):
    """Malformed token or structure in program text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class PositionError(ParseError):
    """An element appears where its position forbids it (e.g. `~a` in a body)."""


class NotPositiveHorn(NNPError):
    pass


class NotNNP(NNPError):
    pass


class NotNotFree(NNPError):
    pass


class BadHandle(NNPError):
    pass


class NoUnit(NNPError):
    pass


class InconsistentResult(NNPError):
    """A derivation produced a complementary pair or fired a constraint."""


class ConstraintFired(InconsistentResult):
    pass


class UniverseTooLarge(NNPError):
    pass


class SizeBudgetExceeded(NNPError):
    pass


class NotSN(NNPError):
    pass


class NotNFNP(NNPError):
    pass


class NotSplittable(NNPError):
    pass


class NotApplicable(NNPError):
    pass


class NotCNF(NNPError):
    pass
