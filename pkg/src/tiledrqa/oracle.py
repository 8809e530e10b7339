"""Brute-force reference analysis.

Materializes the full N x N boolean matrix in one piece and scans every
diagonal and every column sequentially. It shares the neighbourhood test
and the main-diagonal policy with the tiled engine through
`recurrence_block`, so any disagreement between the two paths isolates a
defect in the tiling, carryover or scheduling logic. Exists to be
obviously correct, not to be fast.
"""

import numpy as np

from .embedding import EmbeddedSeries, recurrence_block
from .errors import TooLargeForOracle
from .histograms import LineHistograms
from .settings import AnalysisSettings

__all__ = ["ORACLE_LIMIT", "run_lengths", "oracle_analyze"]

# Refuse full-matrix allocations beyond this many vectors.
ORACLE_LIMIT = 20_000


def run_lengths(mask) -> np.ndarray:
    """Lengths of maximal runs of True in a one-dimensional bool array."""
    mask = np.asarray(mask, dtype=bool)
    padded = np.zeros(mask.shape[0] + 2, dtype=bool)
    padded[1:-1] = mask
    flips = np.flatnonzero(padded[1:] != padded[:-1])
    return flips[1::2] - flips[0::2]


def oracle_analyze(embedded: EmbeddedSeries, settings: AnalysisSettings):
    """Full-matrix analysis returning (LineHistograms, recurrence points).

    Semantics match run_analysis exactly: the radius test is inclusive,
    the main diagonal participates according to the settings, and runs cut
    off by the matrix edge count at their truncated length.
    """
    n = embedded.n_vectors
    if n > ORACLE_LIMIT:
        raise TooLargeForOracle(
            f"{n} vectors would need a {n}x{n} matrix; the reference path "
            f"allows at most {ORACLE_LIMIT}")

    matrix = recurrence_block(embedded, settings, 0, n, 0, n)
    points = int(matrix.sum())
    histograms = LineHistograms(n, recurrence_points=points)

    for k in range(-(n - 1), n):
        for length in run_lengths(np.diagonal(matrix, offset=k)):
            histograms.diagonal[length] += 1

    for j in range(n):
        column = matrix[:, j]
        for length in run_lengths(column):
            histograms.vertical[length] += 1
        for length in run_lengths(~column):
            histograms.white_vertical[length] += 1

    return histograms, points
