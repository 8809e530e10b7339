"""Tiled evaluation of the recurrence matrix and its line structures.

The N x N recurrence matrix is partitioned into square tiles. Each tile
passes through three operators: the neighbourhood evaluation that fills the
tile's bit matrix, the diagonal line detector and the vertical line
detector. Lines crossing tile borders are stitched together through
carryover buffers holding, per diagonal and per column, the length of the
run still open at the last processed border.

Tiles are scheduled along anti-diagonal waves: wave s holds every tile
(r, c) with r + c == s, and waves run in order while tiles inside a wave
run in parallel. A tile's line detectors need tiles (r-1, c-1), (r-1, c)
and (r, c-1) to be finished, all of which live in earlier waves. Diagonals
enter a tile through its top edge, its left edge or its upper-left corner,
which is why the left neighbour matters: a matrix diagonal that is not a
multiple of the tile size crosses two horizontally adjacent tiles inside
one block row. Within a single wave no two tiles share a matrix diagonal
or a matrix column, so concurrent tiles never touch the same carryover
entry.

Histogram counts are integers and merging is commutative, so results are
bit-for-bit identical for every tile size and worker count.
"""

import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddedSeries, recurrence_block
from .errors import DependencyViolation, InvalidArgument
from .histograms import LineHistograms
from .settings import AnalysisSettings

__all__ = ["DEFAULT_TILE_SIZE", "TileGrid", "Tile", "CarryoverBuffers",
           "partition", "create_recurrence_matrix", "detect_diagonal_lines",
           "detect_vertical_lines", "flush_carryovers", "run_analysis",
           "default_workers"]

# 4096^2 bits = 2 MiB per materialized tile.
DEFAULT_TILE_SIZE = 4096


def default_workers() -> int:
    """Number of execution contexts to use when none is requested."""
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


@dataclass
class Tile:
    """One sub-matrix of the recurrence matrix.

    bits holds the tile's boolean content bit-packed row-major into exactly
    ceil(height * width / 8) bytes. It is None until the neighbourhood
    operator has run.
    """

    row_offset: int
    col_offset: int
    height: int
    width: int
    bits: np.ndarray | None = None

    def matrix(self) -> np.ndarray:
        """Unpack the bit matrix into a (height, width) bool array."""
        if self.bits is None:
            raise DependencyViolation(
                "tile bits are absent; run create_recurrence_matrix first")
        flat = np.unpackbits(self.bits, count=self.height * self.width)
        return flat.reshape(self.height, self.width).view(bool)

    def count_points(self) -> int:
        """Number of set bits (recurrence points) in the tile."""
        if self.bits is None:
            raise DependencyViolation(
                "tile bits are absent; run create_recurrence_matrix first")
        return int(np.unpackbits(self.bits, count=self.height * self.width).sum())


@dataclass(frozen=True)
class TileGrid:
    """Partition geometry of the N x N matrix into square tiles.

    Tile (r, c) covers rows [r*T, min((r+1)*T, N)) and the analogous column
    range, so edge tiles may be smaller than T.
    """

    n_vectors: int
    tile_size: int
    rows_of_tiles: int
    cols_of_tiles: int

    def tile(self, r: int, c: int) -> Tile:
        """Fresh tile object (geometry only, no bits) for grid cell (r, c)."""
        if not (0 <= r < self.rows_of_tiles and 0 <= c < self.cols_of_tiles):
            raise InvalidArgument(f"tile ({r}, {c}) outside the grid")
        n, t = self.n_vectors, self.tile_size
        return Tile(
            row_offset=r * t,
            col_offset=c * t,
            height=min((r + 1) * t, n) - r * t,
            width=min((c + 1) * t, n) - c * t,
        )

    def waves(self):
        """Anti-diagonal waves of tile coordinates, in dependency order."""
        for s in range(self.rows_of_tiles + self.cols_of_tiles - 1):
            r_lo = max(0, s - self.cols_of_tiles + 1)
            r_hi = min(self.rows_of_tiles - 1, s)
            yield [(r, s - r) for r in range(r_lo, r_hi + 1)]


def partition(n_vectors: int, tile_size: int) -> TileGrid:
    """Build the tile grid for an N x N matrix with the given tile size."""
    if n_vectors < 1:
        raise InvalidArgument("n_vectors must be >= 1")
    if tile_size < 1:
        raise InvalidArgument("tile_size must be >= 1")
    blocks = -(-n_vectors // tile_size)
    return TileGrid(n_vectors, tile_size, blocks, blocks)


class CarryoverBuffers:
    """Open-run lengths crossing tile borders, plus scan progress.

    diagonal[k + N - 1] is the length of the run of recurrence points on
    matrix diagonal k = j - i that is still open at the last processed
    border; vertical and white_vertical hold the same per column, for runs
    of ones and zeroes respectively. All entries are zero before any tile
    is processed and again after flush_carryovers.

    The progress arrays record, per diagonal and per column, the next
    global row each scan expects. They exist to detect out-of-order tile
    processing and are not part of the statistics.
    """

    def __init__(self, n_vectors: int):
        if n_vectors < 1:
            raise InvalidArgument("n_vectors must be >= 1")
        n = n_vectors
        self.n_vectors = n
        self.diagonal = np.zeros(2 * n - 1, dtype=np.int64)
        self.vertical = np.zeros(n, dtype=np.int64)
        self.white_vertical = np.zeros(n, dtype=np.int64)
        k = np.arange(2 * n - 1) - (n - 1)
        self.diagonal_progress = np.maximum(0, -k)
        self.vertical_progress = np.zeros(n, dtype=np.int64)


def create_recurrence_matrix(tile: Tile, embedded: EmbeddedSeries,
                             settings: AnalysisSettings) -> Tile:
    """Fill the tile's bit matrix from the neighbourhood condition."""
    block = recurrence_block(
        embedded, settings,
        tile.row_offset, tile.row_offset + tile.height,
        tile.col_offset, tile.col_offset + tile.width)
    tile.bits = np.packbits(block)
    return tile


def detect_diagonal_lines(tile: Tile, carryover: CarryoverBuffers,
                          histograms: LineHistograms) -> None:
    """Measure diagonal runs in the tile and update carryover state.

    Runs ending strictly inside the tile add one count at their total
    length (local run plus incoming carryover) to histograms.diagonal. A
    run still open at the tile border stores its accumulated length in the
    carryover buffer; runs cut off by the global matrix edge are counted
    later by flush_carryovers.

    Raises DependencyViolation unless, for every matrix diagonal crossing
    this tile, all earlier tiles on that diagonal have been processed.
    """
    _scan_diagonal(tile.matrix(), tile, carryover, histograms)


def detect_vertical_lines(tile: Tile, carryover: CarryoverBuffers,
                          histograms: LineHistograms) -> None:
    """Measure vertical runs of ones and zeroes in the tile.

    Maximal runs of ones feed histograms.vertical, maximal runs of zeroes
    feed histograms.white_vertical, with carryover continuation exactly as
    for diagonals. Raises DependencyViolation unless the tile directly
    above has been processed.
    """
    _scan_vertical(tile.matrix(), tile, carryover, histograms)


def flush_carryovers(carryover: CarryoverBuffers,
                     histograms: LineHistograms) -> LineHistograms:
    """Count every still-open run at its truncated length and zero buffers.

    Called once after all tiles are processed. Lines the global matrix
    edge cut short are counted at the length they reached.
    """
    for buffer, counts in (
        (carryover.diagonal, histograms.diagonal),
        (carryover.vertical, histograms.vertical),
        (carryover.white_vertical, histograms.white_vertical),
    ):
        open_lengths = buffer[buffer > 0]
        if open_lengths.size:
            binned = np.bincount(open_lengths)
            counts[: binned.size] += binned
        buffer[:] = 0
    return histograms


def run_analysis(embedded: EmbeddedSeries, settings: AnalysisSettings,
                 tile_size: int = DEFAULT_TILE_SIZE,
                 workers: int | None = None):
    """Run the three operators over all tiles and recombine the results.

    Returns (histograms, timing) where histograms is the complete
    LineHistograms including the recurrence point count, and timing maps
    each operator to the summed per-tile seconds it consumed plus the
    total wall-clock time. Phases overlap across workers, so the phase
    values can exceed the total.

    The integer histograms are identical for every tile_size and workers
    combination.
    """
    if workers is None:
        workers = default_workers()
    if workers < 1:
        raise InvalidArgument("workers must be >= 1")
    started = time.perf_counter()
    n = embedded.n_vectors
    grid = partition(n, tile_size)
    carryover = CarryoverBuffers(n)
    timing = {"create_recurrence_matrix": 0.0, "detect_diagonal_lines": 0.0,
              "detect_vertical_lines": 0.0}

    # Each worker thread accumulates into its own histogram set; integer
    # addition commutes, so summing them afterwards gives the same result
    # as any other merge order.
    partials: dict[int, LineHistograms] = {}

    def process(r: int, c: int):
        local = partials.get(threading.get_ident())
        if local is None:
            local = LineHistograms(n)
            partials[threading.get_ident()] = local
        tile = grid.tile(r, c)
        t0 = time.perf_counter()
        create_recurrence_matrix(tile, embedded, settings)
        t1 = time.perf_counter()
        matrix = tile.matrix()
        local.recurrence_points += int(matrix.sum())
        _scan_diagonal(matrix, tile, carryover, local)
        t2 = time.perf_counter()
        _scan_vertical(matrix, tile, carryover, local)
        t3 = time.perf_counter()
        return t1 - t0, t2 - t1, t3 - t2

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for wave in grid.waves():
            futures = [pool.submit(process, r, c) for r, c in wave]
            for future in as_completed(futures):
                spent = future.result()
                timing["create_recurrence_matrix"] += spent[0]
                timing["detect_diagonal_lines"] += spent[1]
                timing["detect_vertical_lines"] += spent[2]

    totals = LineHistograms(n)
    for local in partials.values():
        totals.recurrence_points += local.recurrence_points
        totals.diagonal += local.diagonal
        totals.vertical += local.vertical
        totals.white_vertical += local.white_vertical

    flush_carryovers(carryover, totals)
    timing["total"] = time.perf_counter() - started
    return totals, timing


# ---------------------------------------------------------------------------
# scanning internals


def _combine_runs(run_seq, run_start, run_end, seg_start, seg_end,
                  buffer_ids, carryover_values, counts):
    """Fold a tile's runs into histogram counts and carryover updates.

    run_seq indexes the tile-local sequence (column or diagonal) of each
    run, run_start/run_end give the run in along-sequence coordinates and
    seg_start/seg_end bound the part of each sequence the tile covers. A
    run touching seg_start absorbs the incoming carryover of its sequence;
    a run touching seg_end stays open and is written back. A sequence with
    carryover but no run at seg_start had its line end exactly on the tile
    border, so the carried length is counted as finished.
    """
    ids = buffer_ids[run_seq]
    absorbed = run_end - run_start
    is_first = run_start == seg_start[run_seq]
    is_open = run_end == seg_end[run_seq]
    if is_first.any():
        absorbed = absorbed + np.where(is_first, carryover_values[ids], 0)

    closed = absorbed[~is_open]
    if closed.size:
        binned = np.bincount(closed)
        counts[: binned.size] += binned

    has_first = np.zeros(buffer_ids.shape[0], dtype=bool)
    has_first[run_seq[is_first]] = True
    stale = (~has_first) & (carryover_values[buffer_ids] > 0)
    if stale.any():
        binned = np.bincount(carryover_values[buffer_ids[stale]])
        counts[: binned.size] += binned

    carryover_values[buffer_ids] = 0
    carryover_values[ids[is_open]] = absorbed[is_open]


def _runs_by_row(padded, row_width):
    """Extract maximal runs of ones from zero-padded row sequences.

    padded is a bool array (n_seq, row_width + 2) whose first and last
    columns are zero. Transitions alternate start, end within each row and
    rows have an even transition count, so the even/odd split of the flat
    transition positions is valid globally.
    """
    transitions = padded[:, 1:] != padded[:, :-1]
    flat = np.flatnonzero(transitions)
    starts = flat[0::2]
    ends = flat[1::2]
    seq = starts // (row_width + 1)
    return seq, starts - seq * (row_width + 1), ends - seq * (row_width + 1)


def _scan_vertical(matrix, tile, carryover, histograms):
    h, w = matrix.shape
    row_offset = tile.row_offset
    columns = tile.col_offset + np.arange(w)

    if not (carryover.vertical_progress[columns] == row_offset).all():
        raise DependencyViolation(
            f"vertical detection of tile at ({tile.row_offset}, "
            f"{tile.col_offset}) ran before the tile above finished")

    padded = np.zeros((w, h + 2), dtype=bool)
    padded[:, 1 : h + 1] = matrix.T
    seq, starts, ends = _runs_by_row(padded, h)

    seg_start = np.zeros(w, dtype=np.int64)
    seg_end = np.full(w, h, dtype=np.int64)
    _combine_runs(seq, starts, ends, seg_start, seg_end, columns,
                  carryover.vertical, histograms.vertical)

    wseq, wstarts, wends = _complement_runs(seq, starts, ends, w, h)
    _combine_runs(wseq, wstarts, wends, seg_start, seg_end, columns,
                  carryover.white_vertical, histograms.white_vertical)

    carryover.vertical_progress[columns] = row_offset + h


def _complement_runs(seq, starts, ends, n_seq, length):
    """Runs of zeroes per sequence, derived from the runs of ones.

    The gaps of sequence j are [0, first start), the spans between
    consecutive runs, and [last end, length); empty gaps are dropped.
    Input runs arrive grouped by sequence in ascending position, which the
    flat layout below relies on.
    """
    runs_per_seq = np.bincount(seq, minlength=n_seq)
    slots = runs_per_seq + 1
    offsets = np.zeros(n_seq + 1, dtype=np.int64)
    np.cumsum(slots, out=offsets[1:])
    total = int(offsets[-1])

    gap_seq = np.repeat(np.arange(n_seq), slots)
    gap_start = np.empty(total, dtype=np.int64)
    gap_end = np.empty(total, dtype=np.int64)

    first_slot = offsets[:-1]
    inner = np.ones(total, dtype=bool)
    inner[first_slot] = False
    gap_start[first_slot] = 0
    gap_start[inner] = ends

    last_slot = offsets[1:] - 1
    inner = np.ones(total, dtype=bool)
    inner[last_slot] = False
    gap_end[last_slot] = length
    gap_end[inner] = starts

    keep = gap_start < gap_end
    return gap_seq[keep], gap_start[keep], gap_end[keep]


def _scan_diagonal(matrix, tile, carryover, histograms):
    h, w = matrix.shape
    n = carryover.n_vectors
    offsets = np.arange(-(h - 1), w)  # local diagonal = col - row
    seg_start = np.maximum(0, -offsets)
    seg_end = np.minimum(h, w - offsets)
    buffer_ids = (tile.col_offset - tile.row_offset) + offsets + (n - 1)

    expected = tile.row_offset + seg_start
    if not np.array_equal(carryover.diagonal_progress[buffer_ids], expected):
        raise DependencyViolation(
            f"diagonal detection of tile at ({tile.row_offset}, "
            f"{tile.col_offset}) ran before an earlier tile on one of its "
            f"diagonals finished")

    # Run boundaries: a start has no set cell up-left of it, an end none
    # down-right. nonzero yields ascending rows per diagonal and the stable
    # sort groups by diagonal, so starts and ends pair up elementwise.
    start_mask = matrix.copy()
    start_mask[1:, 1:] &= ~matrix[:-1, :-1]
    rs, cs = np.nonzero(start_mask)
    end_mask = matrix.copy()
    end_mask[:-1, :-1] &= ~matrix[1:, 1:]
    re, ce = np.nonzero(end_mask)

    ks = cs - rs
    ke = ce - re
    order = np.argsort(ks, kind="stable")
    run_seq = ks[order] + (h - 1)
    run_start = rs[order]
    run_end = re[np.argsort(ke, kind="stable")] + 1

    _combine_runs(run_seq, run_start, run_end, seg_start, seg_end,
                  buffer_ids, carryover.diagonal, histograms.diagonal)

    carryover.diagonal_progress[buffer_ids] = tile.row_offset + seg_end
