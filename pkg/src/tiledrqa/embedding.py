"""Time-delay embedding and the recurrence neighbourhood test.

State vectors are never materialized as an N x m array. An EmbeddedSeries
keeps the raw samples plus the embedding parameters, and every consumer
addresses vector components through index arithmetic, so memory stays
proportional to the series length.

`recurrence_block` is the single evaluator of the neighbourhood condition.
The tiled engine, the brute-force reference and the plot renderer all call
it, which pins down the threshold semantics (inclusive, distance <= radius)
and the main-diagonal policy in one place. Accumulation over embedding
components runs in a fixed order with no reassociation, so results are
bit-identical regardless of how the matrix is carved into blocks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidArgument, SeriesTooShort
from .ingest import TimeSeries
from .settings import L1, L2, LINF, AnalysisSettings, normalize_metric

__all__ = ["EmbeddedSeries", "embed", "distance", "is_recurrent",
           "recurrence_block"]

# Row-strip height for block evaluation; keeps per-strip temporaries small
# enough to stay cache resident.
_STRIP_ROWS = 128


@dataclass(frozen=True)
class EmbeddedSeries:
    """State vectors reconstructed from a scalar series by delay embedding.

    Vector i is (s[i], s[i + tau], ..., s[i + (m-1) tau]) for
    0 <= i < n_vectors, where n_vectors = len(s) - (m - 1) * tau.
    """

    values: np.ndarray
    embedding_dimension: int
    time_delay: int
    n_vectors: int

    def vector(self, i: int) -> np.ndarray:
        """Return state vector i as a read-only view into the series."""
        if not 0 <= i < self.n_vectors:
            raise InvalidArgument(f"vector index {i} out of range")
        m, tau = self.embedding_dimension, self.time_delay
        return self.values[i : i + (m - 1) * tau + 1 : tau]


def embed(series, embedding_dimension: int, time_delay: int) -> EmbeddedSeries:
    """Reconstruct state vectors from a scalar series.

    Accepts a TimeSeries or any one-dimensional float array.
    Raises SeriesTooShort when no complete vector fits.
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(
        series, dtype=np.float64)
    m, tau = embedding_dimension, time_delay
    if m < 1 or tau < 1:
        raise InvalidArgument("embedding_dimension and time_delay must be >= 1")
    span = (m - 1) * tau
    if values.shape[0] <= span:
        raise SeriesTooShort(
            f"series of length {values.shape[0]} cannot be embedded with "
            f"m={m}, tau={tau} (needs more than {span} samples)")
    return EmbeddedSeries(values, m, tau, values.shape[0] - span)


def distance(a, b, metric: str = L2) -> float:
    """Distance between two state vectors under the selected norm.

    l1 sums absolute component differences, l2 is the Euclidean norm and
    linf takes the largest absolute difference. Components accumulate in
    index order, matching the block evaluator exactly. With a single
    component all three norms coincide and are computed as |a - b|.
    """
    metric = normalize_metric(metric)
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"vectors have dimensions {a.shape[0]} and {b.shape[0]}")
    if a.shape[0] == 0:
        raise InvalidArgument("vectors must have at least one component")
    if a.shape[0] == 1:
        return abs(float(a[0]) - float(b[0]))
    acc = 0.0
    if metric == L1:
        for k in range(a.shape[0]):
            acc += abs(float(a[k]) - float(b[k]))
    elif metric == L2:
        for k in range(a.shape[0]):
            d = float(a[k]) - float(b[k])
            acc += d * d
        acc = float(np.sqrt(acc))
    else:
        for k in range(a.shape[0]):
            acc = max(acc, abs(float(a[k]) - float(b[k])))
    return acc


def is_recurrent(a, b, metric: str = L2, radius: float = 0.0) -> bool:
    """Whether two state vectors lie within the neighbourhood radius.

    The test is inclusive: distance(a, b) == radius counts as recurrent.
    """
    if not radius >= 0:
        raise InvalidArgument("radius must be >= 0")
    return distance(a, b, metric) <= radius


def recurrence_block(embedded: EmbeddedSeries, settings: AnalysisSettings,
                     row_start: int, row_stop: int,
                     col_start: int, col_stop: int) -> np.ndarray:
    """Evaluate the recurrence condition for a rectangular index block.

    Returns a bool matrix B with B[u, v] true iff vectors (row_start + u)
    and (col_start + v) are within settings.radius under settings.metric.
    When settings.include_main_diagonal is false, cells with equal global
    indices are forced to false.
    """
    n = embedded.n_vectors
    if not (0 <= row_start <= row_stop <= n and 0 <= col_start <= col_stop <= n):
        raise InvalidArgument("block indices out of range")
    m = embedded.embedding_dimension
    tau = embedded.time_delay
    eps = settings.radius
    metric = settings.metric
    s = embedded.values
    height = row_stop - row_start
    width = col_stop - col_start
    out = np.empty((height, width), dtype=bool)

    for u0 in range(0, height, _STRIP_ROWS):
        u1 = min(u0 + _STRIP_ROWS, height)
        acc = None
        for k in range(m):
            rows = s[row_start + k * tau + u0 : row_start + k * tau + u1]
            cols = s[col_start + k * tau : col_start + k * tau + width]
            d = rows[:, None] - cols[None, :]
            if metric == L2 and m > 1:
                np.multiply(d, d, out=d)
            else:
                np.abs(d, out=d)
            if acc is None:
                acc = d
            elif metric == LINF:
                np.maximum(acc, d, out=acc)
            else:
                np.add(acc, d, out=acc)
        if metric == L2 and m > 1:
            np.sqrt(acc, out=acc)
        np.less_equal(acc, eps, out=out[u0:u1])

    if not settings.include_main_diagonal:
        _zero_main_diagonal(out, row_start, col_start)
    return out


def _zero_main_diagonal(block: np.ndarray, row_start: int, col_start: int):
    """Clear cells of the block that lie on the global main diagonal."""
    height, width = block.shape
    shift = col_start - row_start  # v = u - shift on the identity line
    u_lo = max(0, shift)
    u_hi = min(height, width + shift)
    if u_lo < u_hi:
        u = np.arange(u_lo, u_hi)
        block[u, u - shift] = False
