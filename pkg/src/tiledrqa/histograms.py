"""Line-length frequency distributions."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatch

__all__ = ["LineHistograms", "merge"]


def _empty_counts(n: int) -> np.ndarray:
    return np.zeros(n + 1, dtype=np.int64)


@dataclass
class LineHistograms:
    """Frequency distributions of diagonal, vertical and white vertical lines.

    Counts are exact integers. Index l of each array holds the number of
    maximal lines of length l; index 0 is unused. Lines can never exceed
    the vector count, so each array has n_vectors + 1 slots.
    """

    n_vectors: int
    recurrence_points: int = 0
    diagonal: np.ndarray = field(default=None)
    vertical: np.ndarray = field(default=None)
    white_vertical: np.ndarray = field(default=None)

    def __post_init__(self):
        for name in ("diagonal", "vertical", "white_vertical"):
            if getattr(self, name) is None:
                setattr(self, name, _empty_counts(self.n_vectors))

    def copy(self) -> "LineHistograms":
        return LineHistograms(
            self.n_vectors,
            self.recurrence_points,
            self.diagonal.copy(),
            self.vertical.copy(),
            self.white_vertical.copy(),
        )

    @staticmethod
    def _sparse(counts: np.ndarray) -> dict[int, int]:
        lengths = np.nonzero(counts)[0]
        return {int(l): int(counts[l]) for l in lengths if l > 0}

    def to_dicts(self) -> dict[str, dict[int, int]]:
        """Sparse {length: count} mappings, ascending by length."""
        return {
            "diagonal": self._sparse(self.diagonal),
            "vertical": self._sparse(self.vertical),
            "white_vertical": self._sparse(self.white_vertical),
        }

    def __eq__(self, other):
        if not isinstance(other, LineHistograms):
            return NotImplemented
        return (
            self.n_vectors == other.n_vectors
            and self.recurrence_points == other.recurrence_points
            and np.array_equal(self.diagonal, other.diagonal)
            and np.array_equal(self.vertical, other.vertical)
            and np.array_equal(self.white_vertical, other.white_vertical)
        )


def merge(first: LineHistograms, second: LineHistograms) -> LineHistograms:
    """Combine two partial histogram sets by pointwise count addition.

    Merging is commutative and associative, so partial results can be
    reduced in any order without affecting the outcome.
    """
    if first.n_vectors != second.n_vectors:
        raise ShapeMismatch(
            f"cannot merge histograms for {first.n_vectors} and "
            f"{second.n_vectors} vectors")
    return LineHistograms(
        first.n_vectors,
        first.recurrence_points + second.recurrence_points,
        first.diagonal + second.diagonal,
        first.vertical + second.vertical,
        first.white_vertical + second.white_vertical,
    )
