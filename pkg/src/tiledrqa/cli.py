"""Command line front end.

Two commands cover the full workflow: `rqa` runs the quantitative analysis
and emits a JSON document, `plot` renders the recurrence matrix to a
binary PBM file. Input comes either from a column of a delimiter-separated
text file or from a generated sine series.

Exit codes: 0 on success, 1 with a diagnostic on any processing error,
2 on argument errors.
"""

import argparse
import json
import math
import sys

from .embedding import embed
from .engine import DEFAULT_TILE_SIZE, default_workers, run_analysis
from .errors import RQAError
from .ingest import generate_sine, read_column
from .measures import compute_measures
from .plotting import render
from .settings import AnalysisSettings

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiledrqa",
        description="Recurrence quantification analysis over a tiled, "
                    "multi-worker recurrence matrix.")
    commands = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", metavar="PATH",
                        help="delimiter-separated text file to read")
    source.add_argument("--synthetic-sine", type=int, metavar="N",
                        help="generate N samples of a sine series instead "
                             "of reading a file")
    common.add_argument("--x-end-pi-multiples", type=float, default=1000.0,
                        metavar="K",
                        help="sine series spans [0, K*pi] (default 1000)")
    common.add_argument("--delimiter", default=",",
                        help="column separator, one character (default ,)")
    common.add_argument("--column", type=int, default=0,
                        help="zero-based column to extract (default 0)")
    common.add_argument("--offset", type=int, default=0,
                        help="number of leading data rows to skip")
    common.add_argument("--skip-invalid", action="store_true",
                        help="drop rows with unparseable values instead of "
                             "failing; the count is reported on stderr")
    common.add_argument("--embedding", type=int, default=1, metavar="M",
                        help="embedding dimension (default 1)")
    common.add_argument("--delay", type=int, default=1, metavar="TAU",
                        help="time delay (default 1)")
    common.add_argument("--metric", default="euclidean",
                        choices=["l1", "taxicab", "euclidean", "l2",
                                 "linf", "maximum"],
                        help="distance norm (default euclidean)")
    common.add_argument("--radius", type=float, required=True,
                        help="neighbourhood radius; the test is inclusive "
                             "(distance <= radius)")
    common.add_argument("--min-diag", type=int, default=2, metavar="L",
                        help="minimum diagonal line length (default 2)")
    common.add_argument("--min-vert", type=int, default=2, metavar="V",
                        help="minimum vertical line length (default 2)")
    common.add_argument("--min-white", type=int, default=2, metavar="W",
                        help="minimum white vertical line length (default 2)")
    common.add_argument("--main-diagonal", choices=["include", "exclude"],
                        default="include",
                        help="whether the line of identity takes part "
                             "(default include)")
    common.add_argument("--tile-size", type=int, default=DEFAULT_TILE_SIZE,
                        help=f"tile edge length (default {DEFAULT_TILE_SIZE})")
    common.add_argument("--workers", type=int, default=None,
                        help="parallel workers (default: available cores)")
    common.add_argument("--output", metavar="PATH", default=None,
                        help="output file (default: stdout for rqa, "
                             "plot.pbm for plot)")

    commands.add_parser(
        "rqa", parents=[common],
        help="compute measures and histograms, emit JSON")

    plot = commands.add_parser(
        "plot", parents=[common],
        help="render the recurrence matrix to a binary PBM file")
    plot.add_argument("--reduction-factor", type=int, default=1, metavar="B",
                      help="merge BxB matrix blocks into one pixel via OR "
                           "(default 1, lossless)")

    return parser


def _load_series(args):
    if args.synthetic_sine is not None:
        return generate_sine(args.synthetic_sine,
                             args.x_end_pi_multiples * math.pi)
    series = read_column(args.input, delimiter=args.delimiter,
                         column=args.column, offset=args.offset,
                         skip_invalid=args.skip_invalid)
    if series.skipped_rows:
        print(f"note: skipped {series.skipped_rows} invalid row(s)",
              file=sys.stderr)
    return series


def _settings_from(args) -> AnalysisSettings:
    return AnalysisSettings(
        embedding_dimension=args.embedding,
        time_delay=args.delay,
        metric=args.metric,
        radius=args.radius,
        min_diagonal_line_length=args.min_diag,
        min_vertical_line_length=args.min_vert,
        min_white_vertical_line_length=args.min_white,
        include_main_diagonal=args.main_diagonal == "include",
    )


def _run_rqa(args) -> int:
    series = _load_series(args)
    settings = _settings_from(args)
    embedded = embed(series, settings.embedding_dimension,
                     settings.time_delay)
    workers = args.workers if args.workers is not None else default_workers()
    histograms, timing = run_analysis(embedded, settings,
                                      tile_size=args.tile_size,
                                      workers=workers)
    result = compute_measures(histograms, settings)
    sparse = histograms.to_dicts()
    payload = {
        "settings": settings.to_dict(),
        "n_vectors": histograms.n_vectors,
        "recurrence_points": histograms.recurrence_points,
        "measures": result.measures_dict(),
        "histograms": {
            kind: {str(length): count for length, count in counts.items()}
            for kind, counts in sparse.items()
        },
        "timing": timing,
    }
    text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _run_plot(args) -> int:
    series = _load_series(args)
    settings = _settings_from(args)
    embedded = embed(series, settings.embedding_dimension,
                     settings.time_delay)
    workers = args.workers if args.workers is not None else default_workers()
    if args.reduction_factor > 1:
        print(f"warning: reduction factor {args.reduction_factor} merges "
              f"{args.reduction_factor}x{args.reduction_factor} blocks into "
              f"single pixels; fine structure may blend together",
              file=sys.stderr)
    out = args.output or "plot.pbm"
    render(embedded, settings, reduction_factor=args.reduction_factor,
           out=out, tile_size=args.tile_size, workers=workers)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    try:
        if args.command == "rqa":
            return _run_rqa(args)
        return _run_plot(args)
    except (RQAError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
