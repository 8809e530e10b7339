"""Exception types raised by tiledrqa."""


class RQAError(Exception):
    """Base class for all tiledrqa errors."""


class InvalidArgument(RQAError):
    """An argument violates a documented precondition."""


class FileNotReadable(RQAError):
    """The input file does not exist or cannot be opened for reading."""


class ColumnOutOfRange(RQAError):
    """A data row has fewer columns than the requested column index."""

    def __init__(self, row, n_fields, column):
        self.row = row
        self.n_fields = n_fields
        self.column = column
        super().__init__(
            f"row {row} has {n_fields} column(s), cannot extract column {column}"
        )


class ParseError(RQAError):
    """A token could not be parsed as a finite real number."""

    def __init__(self, row, token):
        self.row = row
        self.token = token
        super().__init__(f"row {row}: token {token!r} is not a finite number")


class EmptySeries(RQAError):
    """No values remain after applying the row offset."""


class SeriesTooShort(RQAError):
    """The series is too short for the requested embedding parameters."""


class DimensionMismatch(RQAError):
    """Two state vectors of different dimension were compared."""


class DependencyViolation(RQAError):
    """A tile operator ran before the tiles it depends on were finished."""


class ShapeMismatch(RQAError):
    """Histograms built for different matrix sizes cannot be combined."""


class TooLargeForOracle(RQAError):
    """The brute-force reference path refuses matrices this large."""


class PlotTooLarge(RQAError):
    """The requested plot exceeds the supported pixel dimensions."""
