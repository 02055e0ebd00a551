"""P-value samples and the empirical counting processes built from them.

Everything downstream (estimation, selection, thresholding) consumes a
sample only through R(t) = #{p_i <= t} and, when ground-truth labels are
available, its true-null / false-null decomposition V(t) + S(t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "MissingTruthLabels",
    "PValueSample",
    "SortedPValues",
    "EmpiricalProcesses",
    "sort_pvalues",
]


class MissingTruthLabels(ValueError):
    """Raised when an operation needs null/alternative labels the sample lacks."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def _as_pvalue_array(values: Sequence[float] | np.ndarray) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("p-value sample must be a nonempty 1-d sequence")
    bad = np.flatnonzero(~((arr >= 0.0) & (arr <= 1.0)))
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"p-value at index {i} is {arr[i]!r}, outside [0, 1]")
    return _frozen(arr)


def _check_threshold(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold t={t} outside [0, 1]")
    return t


@dataclass(frozen=True)
class PValueSample:
    """The m observed p-values, optionally labelled with ground truth.

    ``truth[i]`` is True when hypothesis i is a true null (uniform p-value)
    and False when it is a false null.  Labels exist only in simulations;
    real data leaves ``truth`` as None.
    """

    values: np.ndarray
    truth: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_pvalue_array(self.values))
        if self.truth is not None:
            truth = np.asarray(self.truth, dtype=bool)
            if truth.shape != self.values.shape:
                raise ValueError(
                    f"truth labels have length {truth.size}, expected {self.values.size}"
                )
            object.__setattr__(self, "truth", _frozen(truth))

    @property
    def m(self) -> int:
        return int(self.values.size)

    @property
    def m0(self) -> int:
        """Number of true nulls; requires labels."""
        if self.truth is None:
            raise MissingTruthLabels("sample carries no truth labels")
        return int(np.count_nonzero(self.truth))

    @property
    def m1(self) -> int:
        """Number of false nulls; requires labels."""
        return self.m - self.m0


@dataclass(frozen=True)
class SortedPValues:
    """Nondecreasing view of a sample plus the rank <-> original-index maps.

    ``ordered[r]`` is the (r+1)-th order statistic, ``order[r]`` the original
    index it came from, and ``ranks[i]`` the 1-based rank of original index i.
    Ties keep their original relative order.
    """

    ordered: np.ndarray
    order: np.ndarray
    ranks: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "ordered", _frozen(np.asarray(self.ordered, dtype=float)))
        object.__setattr__(self, "order", _frozen(np.asarray(self.order, dtype=np.int64)))
        object.__setattr__(self, "ranks", _frozen(np.asarray(self.ranks, dtype=np.int64)))

    @property
    def m(self) -> int:
        return int(self.ordered.size)

    def rank_of(self, original_index: int) -> int:
        """1-based rank of the value that sat at ``original_index``."""
        return int(self.ranks[original_index])

    def original_index(self, rank: int) -> int:
        """Original position of the rank-th smallest value (rank is 1-based)."""
        if not 1 <= rank <= self.m:
            raise ValueError(f"rank {rank} outside 1..{self.m}")
        return int(self.order[rank - 1])


def sort_pvalues(sample: PValueSample) -> SortedPValues:
    """Sort a sample (stable, so ties keep input order) and build rank maps."""
    order = np.argsort(sample.values, kind="stable")
    ordered = sample.values[order]
    ranks = np.empty(sample.m, dtype=np.int64)
    ranks[order] = np.arange(1, sample.m + 1)
    return SortedPValues(ordered=ordered, order=order, ranks=ranks)


@dataclass(frozen=True)
class EmpiricalProcesses:
    """Evaluators for the counting processes R(t), V(t), S(t).

    R(t) counts all p-values at or below t; V and S count the true-null and
    false-null subsets and are only defined when truth labels are present.
    Counting is a binary search on the sorted values.  Immutable, so any
    number of concurrent readers is safe.
    """

    sorted: SortedPValues
    truth: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.truth is not None:
            truth = np.asarray(self.truth, dtype=bool)
            if truth.size != self.sorted.m:
                raise ValueError(
                    f"truth labels have length {truth.size}, expected {self.sorted.m}"
                )
            object.__setattr__(self, "truth", _frozen(truth))
            # truth is indexed by original position; realign to rank order
            truth_by_rank = truth[self.sorted.order]
            object.__setattr__(self, "_null_ordered", _frozen(self.sorted.ordered[truth_by_rank]))
            object.__setattr__(self, "_false_ordered", _frozen(self.sorted.ordered[~truth_by_rank]))

    @classmethod
    def from_sample(cls, sample: PValueSample) -> "EmpiricalProcesses":
        return cls(sort_pvalues(sample), sample.truth)

    @property
    def m(self) -> int:
        return self.sorted.m

    def count_R(self, t: float) -> int:
        """#{p_i <= t}."""
        t = _check_threshold(t)
        return int(np.searchsorted(self.sorted.ordered, t, side="right"))

    def count_V(self, t: float) -> int:
        """#{true-null p_i <= t}; requires truth labels."""
        t = _check_threshold(t)
        if self.truth is None:
            raise MissingTruthLabels("V(t) needs truth labels, sample has none")
        return int(np.searchsorted(self._null_ordered, t, side="right"))

    def count_S(self, t: float) -> int:
        """#{false-null p_i <= t}; requires truth labels."""
        t = _check_threshold(t)
        if self.truth is None:
            raise MissingTruthLabels("S(t) needs truth labels, sample has none")
        return int(np.searchsorted(self._false_ordered, t, side="right"))
