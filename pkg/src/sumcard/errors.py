"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class SumcardError(Exception):
    """Base class for all library errors."""


class ParseError(SumcardError):
    """Malformed N-Triples, query text or summary file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class SummaryFormatError(ParseError):
    """Summary file with a bad header, version or body."""


class MappingError(SumcardError):
    """A resource is missing from the domain of the summarisation function."""


class InconsistentSummaryError(SumcardError):
    """Some summary triple has a weight larger than its size."""


class UnknownBucketError(SumcardError):
    pass


class CapExceededError(SumcardError):
    """A configured work cap was exceeded; subclasses name which one."""


class GeneralPathIntractable(CapExceededError):
    pass


class VarianceIntractable(GeneralPathIntractable):
    pass


class AnswerCapExceeded(CapExceededError):
    pass


class WorldCapExceeded(CapExceededError):
    pass


class FastPathNotApplicable(SumcardError):
    """The closed product formula was requested for a query that is not unification-free."""


class BoundInapplicable(SumcardError):
    """The q-error bound needs an expectation of at least one."""
