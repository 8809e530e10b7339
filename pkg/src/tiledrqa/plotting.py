"""Rendering the recurrence matrix as a portable bitmap (PBM, type P4).

The matrix is computed tile by tile with the same neighbourhood evaluator
the analysis engine uses, so a rendered plot at reduction factor 1 is the
engine's matrix bit for bit. Larger reduction factors shrink the image by
OR-ing each b x b block into one pixel: merging can blur structures but
never deletes a recurrence point, unlike subsampling.

Image orientation follows recurrence-plot convention: matrix row 0 is the
bottom row of the image.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddedSeries, recurrence_block
from .engine import DEFAULT_TILE_SIZE, default_workers, partition
from .errors import InvalidArgument, PlotTooLarge
from .settings import AnalysisSettings

__all__ = ["MAX_PLOT_SIZE", "RecurrencePlot", "compute_plot", "write_pbm",
           "read_pbm", "render"]

MAX_PLOT_SIZE = 65_536


@dataclass(frozen=True)
class RecurrencePlot:
    """A possibly reduced recurrence matrix, bit-packed row by row.

    size is ceil(n_vectors / reduction_factor). row_bits holds one packed
    row per matrix row (row 0 first), each padded to a byte boundary,
    which is also the PBM raster layout.
    """

    n_vectors: int
    reduction_factor: int
    size: int
    row_bits: np.ndarray

    def matrix(self) -> np.ndarray:
        """Unpack to a (size, size) bool matrix in matrix orientation."""
        return np.unpackbits(self.row_bits, axis=1, count=self.size).view(bool)


def compute_plot(embedded: EmbeddedSeries, settings: AnalysisSettings,
                 reduction_factor: int = 1,
                 tile_size: int = DEFAULT_TILE_SIZE,
                 workers: int | None = None) -> RecurrencePlot:
    """Evaluate the recurrence matrix and reduce it to plot resolution."""
    if reduction_factor < 1:
        raise InvalidArgument("reduction_factor must be >= 1")
    n = embedded.n_vectors
    factor = reduction_factor
    size = -(-n // factor)
    if size > MAX_PLOT_SIZE:
        raise PlotTooLarge(
            f"{size} pixels per side exceeds the {MAX_PLOT_SIZE} limit; "
            f"increase the reduction factor")
    if workers is None:
        workers = default_workers()

    grid = partition(n, tile_size)
    canvas = np.zeros((size, size), dtype=bool)

    def evaluate(r: int, c: int):
        tile = grid.tile(r, c)
        block = recurrence_block(
            embedded, settings,
            tile.row_offset, tile.row_offset + tile.height,
            tile.col_offset, tile.col_offset + tile.width)
        if factor == 1:
            return tile.row_offset, tile.col_offset, block
        reduced, row0, col0 = _or_reduce(block, tile.row_offset,
                                         tile.col_offset, factor)
        return row0, col0, reduced

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(evaluate, r, c)
                   for r in range(grid.rows_of_tiles)
                   for c in range(grid.cols_of_tiles)]
        for future in as_completed(futures):
            row0, col0, block = future.result()
            target = canvas[row0 : row0 + block.shape[0],
                            col0 : col0 + block.shape[1]]
            np.logical_or(target, block, out=target)

    return RecurrencePlot(n, factor, size, np.packbits(canvas, axis=1))


def _or_reduce(block, row_offset, col_offset, factor):
    """OR-reduce a tile into pixels aligned to the global b x b blocks."""
    row_starts = _group_starts(row_offset, block.shape[0], factor)
    col_starts = _group_starts(col_offset, block.shape[1], factor)
    cells = block.view(np.uint8)
    reduced = np.bitwise_or.reduceat(cells, row_starts, axis=0)
    reduced = np.bitwise_or.reduceat(reduced, col_starts, axis=1)
    return reduced.view(bool), row_offset // factor, col_offset // factor


def _group_starts(offset, extent, factor):
    """Local indices where a new global block of `factor` cells begins."""
    first_aligned = (-offset) % factor
    starts = np.arange(first_aligned, extent, factor)
    if first_aligned != 0:
        starts = np.concatenate(([0], starts))
    return starts


def write_pbm(plot: RecurrencePlot, path) -> None:
    """Write the plot as a binary PBM (P4) file.

    Header "P4\\n<width> <height>\\n", then rows packed MSB-first with 1
    for black. Matrix row 0 is emitted last, placing it at the bottom of
    the image.
    """
    header = f"P4\n{plot.size} {plot.size}\n".encode("ascii")
    with open(path, "wb") as handle:
        handle.write(header)
        handle.write(plot.row_bits[::-1].tobytes())


def read_pbm(path) -> np.ndarray:
    """Parse a binary PBM file into a bool array in image orientation.

    Row 0 of the result is the top image row; flip with [::-1] to get
    matrix orientation as produced by compute_plot.
    """
    with open(path, "rb") as handle:
        data = handle.read()
    fields = []
    pos = 0
    while len(fields) < 3:
        end = data.index(b"\n", pos)
        line = data[pos:end].strip()
        pos = end + 1
        if line.startswith(b"#") or not line:
            continue
        fields.extend(line.split())
    if fields[0] != b"P4":
        raise InvalidArgument(f"not a binary PBM file: magic {fields[0]!r}")
    width, height = int(fields[1]), int(fields[2])
    row_bytes = -(-width // 8)
    raster = np.frombuffer(data[pos : pos + height * row_bytes],
                           dtype=np.uint8).reshape(height, row_bytes)
    return np.unpackbits(raster, axis=1, count=width).view(bool)


def render(embedded: EmbeddedSeries, settings: AnalysisSettings,
           reduction_factor: int = 1, out="recurrence.pbm",
           tile_size: int = DEFAULT_TILE_SIZE,
           workers: int | None = None) -> RecurrencePlot:
    """Compute the recurrence plot and write it to a PBM file."""
    plot = compute_plot(embedded, settings, reduction_factor, tile_size,
                        workers)
    write_pbm(plot, out)
    return plot
