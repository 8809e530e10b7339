"""Quantitative measures derived from line-length histograms.

All measures follow the standard definitions of recurrence quantification
analysis. A measure whose denominator is zero is reported as None rather
than a silent zero; the CLI serializes None as JSON null.
"""

from dataclasses import dataclass

import numpy as np

from .histograms import LineHistograms
from .settings import AnalysisSettings

__all__ = ["RQAResult", "compute_measures"]


@dataclass(frozen=True)
class RQAResult:
    """Measures of one analysis plus the histograms they came from.

    rr        recurrence rate: fraction of recurrent cells.
    det       determinism: fraction of recurrence points in diagonal lines
              of at least the minimum length.
    l_mean    average diagonal line length (lines >= minimum).
    l_max     longest diagonal line.
    div       divergence, 1 / l_max.
    l_entr    Shannon entropy (natural log) of the diagonal line lengths.
    lam       laminarity: fraction of recurrence points in vertical lines.
    tt        trapping time: average vertical line length.
    v_max     longest vertical line.
    v_entr    entropy of the vertical line lengths.
    w_mean    average white vertical line length.
    w_max     longest white vertical line.
    w_entr    entropy of the white vertical line lengths.
    """

    settings: AnalysisSettings
    histograms: LineHistograms
    rr: float | None
    det: float | None
    l_mean: float | None
    l_max: int | None
    div: float | None
    l_entr: float | None
    lam: float | None
    tt: float | None
    v_max: int | None
    v_entr: float | None
    w_mean: float | None
    w_max: int | None
    w_entr: float | None

    def measures_dict(self) -> dict:
        """Measures under their conventional short names."""
        return {
            "RR": self.rr,
            "DET": self.det,
            "L": self.l_mean,
            "L_max": self.l_max,
            "DIV": self.div,
            "L_entr": self.l_entr,
            "LAM": self.lam,
            "TT": self.tt,
            "V_max": self.v_max,
            "V_entr": self.v_entr,
            "W": self.w_mean,
            "W_max": self.w_max,
            "W_entr": self.w_entr,
        }


def _line_stats(counts: np.ndarray, min_length: int):
    """(weighted sum >= min, line count >= min, max length, entropy) or Nones."""
    lengths = np.arange(counts.shape[0], dtype=np.int64)
    selected = counts[min_length:]
    sel_lengths = lengths[min_length:]
    n_lines = int(selected.sum())
    weighted = int((sel_lengths * selected).sum())
    nonzero = np.nonzero(counts)[0]
    longest = int(nonzero[-1]) if nonzero.size else None
    if n_lines > 0:
        p = selected[selected > 0].astype(np.float64) / n_lines
        entropy = float(-(p * np.log(p)).sum())
    else:
        entropy = None
    return weighted, n_lines, longest, entropy


def compute_measures(histograms: LineHistograms,
                     settings: AnalysisSettings) -> RQAResult:
    """Derive the quantitative measures from exact integer histograms.

    The recurrence rate denominator is N^2, or N^2 - N when the main
    diagonal is excluded from the analysis. Ratios of diagonal or vertical
    structures use the total weighted line mass (all lengths >= 1) as the
    reference, which by conservation equals the recurrence point count.
    """
    n = histograms.n_vectors
    points = histograms.recurrence_points

    cells = n * n if settings.include_main_diagonal else n * n - n
    rr = points / cells if cells > 0 else None

    lengths = np.arange(n + 1, dtype=np.int64)
    diag_total = int((lengths * histograms.diagonal).sum())
    vert_total = int((lengths * histograms.vertical).sum())

    d_weighted, d_lines, l_max, l_entr = _line_stats(
        histograms.diagonal, settings.min_diagonal_line_length)
    v_weighted, v_lines, v_max, v_entr = _line_stats(
        histograms.vertical, settings.min_vertical_line_length)
    w_weighted, w_lines, w_max, w_entr = _line_stats(
        histograms.white_vertical, settings.min_white_vertical_line_length)

    det = d_weighted / diag_total if diag_total > 0 else None
    l_mean = d_weighted / d_lines if d_lines > 0 else None
    div = 1.0 / l_max if l_max is not None else None
    lam = v_weighted / vert_total if vert_total > 0 else None
    tt = v_weighted / v_lines if v_lines > 0 else None
    w_mean = w_weighted / w_lines if w_lines > 0 else None

    return RQAResult(
        settings=settings,
        histograms=histograms,
        rr=rr,
        det=det,
        l_mean=l_mean,
        l_max=l_max,
        div=div,
        l_entr=l_entr,
        lam=lam,
        tt=tt,
        v_max=v_max,
        v_entr=v_entr,
        w_mean=w_mean,
        w_max=w_max,
        w_entr=w_entr,
    )
