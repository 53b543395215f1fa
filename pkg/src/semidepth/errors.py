"""Exception types shared across the package."""

from __future__ import annotations


class SemidepthError(Exception):
    """Base class for all errors raised by this package."""


class DegreeMismatchError(SemidepthError, ValueError):
    pass


class ParseError(SemidepthError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class BudgetExceeded(SemidepthError, RuntimeError):
    """Raised when a closure or search outgrows its budget.

    ``partial`` carries how far the computation got (element count or
    number of candidates examined).
    """

    def __init__(self, message: str, partial: int):
        self.partial = partial
        super().__init__(f"{message} (partial count {partial})")


class NotAssociativeError(SemidepthError, ValueError):
    def __init__(self, triple: tuple[int, int, int]):
        self.triple = triple
        a, b, c = triple
        super().__init__(f"table is not associative: ({a}*{b})*{c} != {a}*({b}*{c}) (1-based)")


class PreconditionError(SemidepthError, ValueError):
    pass
