"""Frequency tables: binning, truncation, empirical distributions, CSV I/O.

A :class:`FrequencyTable` is the universal container for grouped or
truncated observations: strictly increasing support points with
nonnegative real counts (real-valued so fractional reference counts are
representable). ``full_size`` optionally records the complete sample size
when the generator is known (simulation); estimators never read it.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import TruncestError

__all__ = [
    "FrequencyTable",
    "Truncation",
    "EmpiricalTruncated",
    "bin_sample",
    "tabulate",
    "truncate",
    "drop_zero",
    "empirical_truncated",
    "load_csv",
    "save_csv",
]


def _as_1d(values, name):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


@dataclass(frozen=True)
class FrequencyTable:
    points: np.ndarray
    counts: np.ndarray
    full_size: Optional[float] = None

    def __post_init__(self):
        pts = _as_1d(self.points, "points")
        cnt = _as_1d(self.counts, "counts")
        if len(pts) != len(cnt):
            raise ValueError("points and counts must have the same length")
        if len(pts) < 1:
            raise ValueError("a frequency table needs at least one row")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("points must be strictly increasing")
        if np.any(cnt < 0):
            raise ValueError("counts must be nonnegative")
        pts.setflags(write=False)
        cnt.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "counts", cnt)
        if self.full_size is not None:
            fs = float(self.full_size)
            if fs < self.total - 1e-9:
                raise ValueError("full_size cannot be smaller than the summed counts")
            object.__setattr__(self, "full_size", fs)

    @property
    def total(self) -> float:
        """Truncated sample size: the sum of the counts."""
        return float(self.counts.sum())

    def __len__(self):
        return len(self.points)

    def approx_equals(self, other, tol=0.0) -> bool:
        return (
            len(self) == len(other)
            and np.allclose(self.points, other.points, rtol=0, atol=tol)
            and np.allclose(self.counts, other.counts, rtol=0, atol=tol)
        )


@dataclass(frozen=True)
class Truncation:
    """A chosen subset of a table's support points."""

    kept_points: np.ndarray

    def __post_init__(self):
        pts = np.unique(_as_1d(self.kept_points, "kept_points"))
        if len(pts) < 1:
            raise ValueError("a truncation keeps at least one point")
        pts.setflags(write=False)
        object.__setattr__(self, "kept_points", pts)


@dataclass(frozen=True)
class EmpiricalTruncated:
    """Observed relative frequencies renormalized on a truncation's support."""

    points: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        pts = _as_1d(self.points, "points")
        pr = _as_1d(self.probs, "probs")
        if len(pts) != len(pr):
            raise ValueError("points and probs must have the same length")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("points must be strictly increasing")
        if np.any(pr <= 0):
            raise ValueError("probs must be strictly positive")
        if abs(pr.sum() - 1.0) > 1e-9:
            raise ValueError("probs must sum to 1")
        pts.setflags(write=False)
        pr.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", pr)


def bin_sample(sample: Sequence[float], num_bins: int) -> FrequencyTable:
    """Group a raw sample into equal-width classes over [min, max].

    Points are the class midpoints; the last class is closed on the right,
    so every sample value lands in exactly one class and the counts sum to
    the sample size. A zero-spread sample collapses to a single row.
    """
    x = _as_1d(sample, "sample")
    if len(x) == 0:
        raise ValueError("sample must be nonempty")
    if num_bins < 1:
        raise ValueError("num_bins must be >= 1")
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        return FrequencyTable([lo], [float(len(x))], full_size=float(len(x)))
    k = int(num_bins)
    # fractional position in [0, k]; the hi value maps to the last class
    idx = np.minimum(((x - lo) / (hi - lo) * k).astype(int), k - 1)
    counts = np.bincount(idx, minlength=k).astype(float)
    width = (hi - lo) / k
    mids = lo + (np.arange(k) + 0.5) * width
    return FrequencyTable(mids, counts, full_size=float(len(x)))


def tabulate(values: Sequence[float]) -> FrequencyTable:
    """Frequency table of the distinct values of a (discrete) sample."""
    x = _as_1d(values, "values")
    if len(x) == 0:
        raise ValueError("values must be nonempty")
    pts, cnt = np.unique(x, return_counts=True)
    return FrequencyTable(pts, cnt.astype(float), full_size=float(len(x)))


def truncate(table: FrequencyTable, trunc) -> FrequencyTable:
    """Restrict a table to the points kept by a truncation.

    ``trunc`` may be a :class:`Truncation` or a plain sequence of points.
    The result's ``full_size`` is cleared: the complete size is unknown
    after truncation unless the caller restores it explicitly.
    """
    if not isinstance(trunc, Truncation):
        trunc = Truncation(np.asarray(trunc))
    mask = np.isin(table.points, trunc.kept_points)
    missing = np.setdiff1d(trunc.kept_points, table.points)
    if len(missing) > 0:
        raise TruncestError(f"truncation points not in table: {missing.tolist()}")
    return FrequencyTable(table.points[mask], table.counts[mask])


def drop_zero(table: FrequencyTable) -> FrequencyTable:
    """Remove zero-count rows (order preserved); errors if nothing is left."""
    mask = table.counts > 0
    if not mask.any():
        raise TruncestError("all counts are zero; nothing left after drop_zero")
    if mask.all():
        return table
    return replace(table, points=table.points[mask], counts=table.counts[mask])


def empirical_truncated(table: FrequencyTable) -> EmpiricalTruncated:
    """Proportionally allocated probabilities on the table's support.

    Requires strictly positive counts (use :func:`drop_zero` first); the
    result keeps exactly the counts' pairwise ratios and sums to one.
    """
    if np.any(table.counts <= 0):
        raise TruncestError(
            "empirical_truncated requires positive counts; apply drop_zero first"
        )
    return EmpiricalTruncated(table.points, table.counts / table.total)


def load_csv(path) -> FrequencyTable:
    """Read a ``point,count`` CSV (UTF-8, ``#`` comment lines ignored)."""
    points, counts = [], []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh)
                if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise TruncestError(f"{path}: no data rows")
    header = [c.strip().lower() for c in rows[0]]
    if header != ["point", "count"]:
        raise TruncestError(f"{path}: expected header 'point,count', got {rows[0]!r}")
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise TruncestError(f"{path}: row {lineno} is malformed: {row!r}")
        try:
            points.append(float(row[0]))
            counts.append(float(row[1]))
        except ValueError:
            raise TruncestError(f"{path}: row {lineno} is not numeric: {row!r}") from None
    try:
        return FrequencyTable(points, counts)
    except ValueError as exc:
        raise TruncestError(f"{path}: {exc}") from None


def save_csv(table: FrequencyTable, path) -> None:
    """Write a table as ``point,count`` CSV (``full_size`` is not persisted)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["point", "count"])
        for p, c in zip(table.points, table.counts):
            writer.writerow([repr(float(p)), repr(float(c))])
