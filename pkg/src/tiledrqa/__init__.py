"""Recurrence quantification analysis over a tiled recurrence matrix.

The package splits the N x N recurrence matrix into tiles, runs the
neighbourhood evaluation and the line detectors per tile across a pool of
workers, stitches line structures across tile borders with carryover
buffers, and derives the standard quantitative measures from exact integer
histograms. Results are bit-for-bit identical for every tile size and
worker count.
"""

from .embedding import (EmbeddedSeries, distance, embed, is_recurrent,
                        recurrence_block)
from .engine import (DEFAULT_TILE_SIZE, CarryoverBuffers, Tile, TileGrid,
                     create_recurrence_matrix, default_workers,
                     detect_diagonal_lines, detect_vertical_lines,
                     flush_carryovers, partition, run_analysis)
from .errors import (ColumnOutOfRange, DependencyViolation,
                     DimensionMismatch, EmptySeries, FileNotReadable,
                     InvalidArgument, ParseError, PlotTooLarge, RQAError,
                     SeriesTooShort, ShapeMismatch, TooLargeForOracle)
from .histograms import LineHistograms, merge
from .ingest import TimeSeries, generate_sine, read_column
from .measures import RQAResult, compute_measures
from .oracle import oracle_analyze, run_lengths
from .plotting import RecurrencePlot, compute_plot, read_pbm, render, write_pbm
from .settings import L1, L2, LINF, AnalysisSettings, normalize_metric

__version__ = "0.1.0"


def analyze(series, settings: AnalysisSettings,
            tile_size: int = DEFAULT_TILE_SIZE,
            workers: int | None = None) -> RQAResult:
    """End-to-end convenience: embed, run the tiled engine, derive measures."""
    embedded = embed(series, settings.embedding_dimension,
                     settings.time_delay)
    histograms, _ = run_analysis(embedded, settings, tile_size=tile_size,
                                 workers=workers)
    return compute_measures(histograms, settings)
