"""Time series ingestion.

Extracts a single column from delimiter-separated text files and generates
synthetic series for benchmarks. All values are parsed as 64-bit floats and
must be finite; NaN and infinities are rejected at the door.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ColumnOutOfRange,
    EmptySeries,
    FileNotReadable,
    InvalidArgument,
    ParseError,
)

__all__ = ["TimeSeries", "read_column", "generate_sine"]


@dataclass(frozen=True)
class TimeSeries:
    """An ordered sequence of finite scalar samples.

    The backing array is float64 and marked read-only, so a TimeSeries can
    be shared freely across threads.
    """

    values: np.ndarray
    skipped_rows: int = field(default=0, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise InvalidArgument("a time series must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise InvalidArgument("a time series must not contain NaN or Inf")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[0]


def read_column(path, delimiter: str = ",", column: int = 0, offset: int = 0,
                skip_invalid: bool = False) -> TimeSeries:
    """Read one column of a delimiter-separated text file as a TimeSeries.

    Parameters
    ----------
    path : str or os.PathLike
        File to read. Plain text, rows separated by newlines.
    delimiter : str
        The single character separating columns.
    column : int
        Zero-based index of the column to extract.
    offset : int
        Number of leading data rows to discard. Rows skipped this way are
        not parsed at all, so a header row never causes a parse error.
        Rows that are entirely empty are ignored and do not count.
    skip_invalid : bool
        When true, rows whose token does not parse as a finite number (or
        that are too short to contain the column) are dropped instead of
        raising. The number of dropped rows is reported on the result as
        ``skipped_rows``.

    Returns
    -------
    TimeSeries
        The extracted values in file order.

    Raises
    ------
    FileNotReadable, ColumnOutOfRange, ParseError, EmptySeries, InvalidArgument

    Row numbers in errors are 1-based physical line numbers.
    """
    if len(delimiter) != 1:
        raise InvalidArgument("delimiter must be a single character")
    if column < 0:
        raise InvalidArgument("column must be >= 0")
    if offset < 0:
        raise InvalidArgument("offset must be >= 0")

    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise FileNotReadable(f"cannot read {path}: {exc}") from exc

    values: list[float] = []
    skipped = 0
    remaining_offset = offset
    for lineno, line in enumerate(lines, start=1):
        row = line.rstrip("\n").rstrip("\r")
        if row == "":
            continue
        if remaining_offset > 0:
            remaining_offset -= 1
            continue
        fields = row.split(delimiter)
        if column >= len(fields):
            if skip_invalid:
                skipped += 1
                continue
            raise ColumnOutOfRange(lineno, len(fields), column)
        token = fields[column].strip()
        try:
            value = float(token)
        except ValueError:
            value = math.nan
        if not math.isfinite(value):
            if skip_invalid:
                skipped += 1
                continue
            raise ParseError(lineno, token)
        values.append(value)

    if not values:
        raise EmptySeries(f"no values extracted from {path}")
    return TimeSeries(np.array(values, dtype=np.float64), skipped_rows=skipped)


def generate_sine(n: int, x_end: float) -> TimeSeries:
    """Generate sin(x) sampled at n points linearly spaced over [0, x_end].

    The endpoint is included: sample k is sin(x_end * k / (n - 1)).
    """
    if n < 2:
        raise InvalidArgument("generate_sine requires n >= 2")
    return TimeSeries(np.sin(np.linspace(0.0, x_end, n)))
