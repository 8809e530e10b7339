"""Analysis parameters shared by the engine, the oracle and the CLI."""

from dataclasses import dataclass

from .errors import InvalidArgument

__all__ = ["L1", "L2", "LINF", "normalize_metric", "AnalysisSettings"]

L1 = "l1"
L2 = "l2"
LINF = "linf"

_METRIC_ALIASES = {
    "l1": L1,
    "taxicab": L1,
    "manhattan": L1,
    "l2": L2,
    "euclidean": L2,
    "linf": LINF,
    "maximum": LINF,
    "supremum": LINF,
    "chebyshev": LINF,
}


def normalize_metric(name: str) -> str:
    """Map a metric name or alias to one of 'l1', 'l2', 'linf'."""
    try:
        return _METRIC_ALIASES[name.lower()]
    except KeyError:
        raise InvalidArgument(
            f"unknown metric {name!r}; expected one of {sorted(_METRIC_ALIASES)}"
        ) from None


@dataclass(frozen=True)
class AnalysisSettings:
    """Parameters of one recurrence analysis.

    embedding_dimension and time_delay control the state reconstruction,
    metric and radius define the neighbourhood test (inclusive: a pair is
    recurrent when its distance is <= radius), and the three minimum line
    lengths filter the histograms when measures are derived.

    include_main_diagonal selects whether the line of identity (matrix
    cells i == j) participates in the recurrence matrix. When false those
    cells are forced to zero before any line detection and the recurrence
    rate denominator shrinks to N^2 - N.
    """

    embedding_dimension: int = 1
    time_delay: int = 1
    metric: str = L2
    radius: float = 1.0
    min_diagonal_line_length: int = 2
    min_vertical_line_length: int = 2
    min_white_vertical_line_length: int = 2
    include_main_diagonal: bool = True

    def __post_init__(self):
        object.__setattr__(self, "metric", normalize_metric(self.metric))
        if self.embedding_dimension < 1:
            raise InvalidArgument("embedding_dimension must be >= 1")
        if self.time_delay < 1:
            raise InvalidArgument("time_delay must be >= 1")
        if not self.radius >= 0:
            raise InvalidArgument("radius must be >= 0")
        for name in ("min_diagonal_line_length", "min_vertical_line_length",
                     "min_white_vertical_line_length"):
            if getattr(self, name) < 1:
                raise InvalidArgument(f"{name} must be >= 1")

    def to_dict(self) -> dict:
        """Stable mapping of the parameters, used for the JSON settings echo."""
        return {
            "embedding_dimension": self.embedding_dimension,
            "time_delay": self.time_delay,
            "metric": self.metric,
            "radius": self.radius,
            "min_diagonal_line_length": self.min_diagonal_line_length,
            "min_vertical_line_length": self.min_vertical_line_length,
            "min_white_vertical_line_length": self.min_white_vertical_line_length,
            "include_main_diagonal": self.include_main_diagonal,
        }
