"""Dataset container and elementary cell statistics.

A :class:`Sample` holds the observed triples ``(Y, D, Z)`` with a binary
treatment ``D`` and a binary instrument ``Z``.  All downstream bound
computations consume only the four ``(d, z)`` cells and their empirical
(sub)distributions, so the sample caches sorted cell values and prefix sums
once and reuses them everywhere.

Samples are immutable after construction; the lazy caches are idempotent,
so concurrent readers are safe.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import pandas as pd

from .errors import (
    EmptyCellError,
    EmptyInstrumentArmError,
    MissingColumnError,
    NonBinaryInstrumentError,
    NonBinaryTreatmentError,
    NonFiniteOutcomeError,
)

__all__ = [
    "CellStats",
    "Observation",
    "Sample",
    "cell_stats",
    "load_csv",
    "subdistribution",
]


class Observation(NamedTuple):
    """One observed triple: real outcome, binary treatment, binary instrument."""

    y: float
    d: int
    z: int


def _discreteness_threshold(n: int) -> float:
    # prefer exact atom arithmetic whenever the support is small
    return max(50.0, np.sqrt(n))


class Sample:
    """Immutable dataset of ``(Y, D, Z)`` triples with cached cell partitions.

    Parameters
    ----------
    y, d, z : array_like
        Outcome (finite reals), treatment and instrument (each in {0, 1}).
    outcome_kind : {"auto", "discrete", "continuous"}
        With ``"auto"``, the outcome is classified discrete when the number
        of unique values is at most ``max(50, sqrt(n))``.  Pass an explicit
        kind to override for mixed outcomes.

    Notes
    -----
    Row order is preserved.  Cells index the rows with ``D = d, Z = z``;
    a cell may be empty, but analysis entry points require both instrument
    arms to be nonempty.
    """

    def __init__(self, y, d, z, outcome_kind: str = "auto"):
        y = np.ascontiguousarray(y, dtype=np.float64)
        d = np.ascontiguousarray(d)
        z = np.ascontiguousarray(z)
        if y.ndim != 1 or y.shape != d.shape or y.shape != z.shape:
            raise ValueError("y, d, z must be one-dimensional arrays of equal length")
        if y.size == 0:
            raise ValueError("sample is empty")
        bad = ~np.isfinite(y)
        if bad.any():
            raise NonFiniteOutcomeError(f"non-finite outcome in row {int(np.argmax(bad)) + 1}")
        self.d = _as_binary(d, NonBinaryTreatmentError, "treatment")
        self.z = _as_binary(z, NonBinaryInstrumentError, "instrument")
        self.y = y
        self.y.setflags(write=False)
        self.d.setflags(write=False)
        self.z.setflags(write=False)

        self._cells: dict[tuple[int, int], np.ndarray] = {}
        for dd in (0, 1):
            for zz in (0, 1):
                idx = np.flatnonzero((self.d == dd) & (self.z == zz))
                idx.setflags(write=False)
                self._cells[(dd, zz)] = idx
        self._arm_n = (int(np.sum(self.z == 0)), int(np.sum(self.z == 1)))

        if outcome_kind not in ("auto", "discrete", "continuous"):
            raise ValueError(f"unknown outcome_kind {outcome_kind!r}")
        support = np.unique(y)
        if outcome_kind == "auto":
            outcome_kind = (
                "discrete" if support.size <= _discreteness_threshold(y.size) else "continuous"
            )
        self.outcome_kind = outcome_kind
        self.support = support if outcome_kind == "discrete" else None
        if self.support is not None:
            self.support.setflags(write=False)

        # lazy caches (idempotent; safe to race)
        self._sorted: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
        self._joint: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    # -- basic shape ---------------------------------------------------------

    @property
    def n(self) -> int:
        return self.y.size

    def arm_size(self, z: int) -> int:
        return self._arm_n[z]

    def cell(self, d: int, z: int) -> np.ndarray:
        """Row indices of the (d, z) cell, in original order."""
        return self._cells[(d, z)]

    def cell_values(self, d: int, z: int) -> np.ndarray:
        return self.y[self._cells[(d, z)]]

    def row(self, i: int) -> Observation:
        return Observation(float(self.y[i]), int(self.d[i]), int(self.z[i]))

    def require_both_arms(self) -> None:
        for zz in (0, 1):
            if self._arm_n[zz] == 0:
                raise EmptyInstrumentArmError(f"no observations with Z={zz}")

    def relabel_instrument(self) -> "Sample":
        """Same data with the instrument label flipped (Z -> 1 - Z)."""
        return Sample(self.y, self.d, 1 - self.z, outcome_kind=self.outcome_kind)

    # -- cached cell structures ------------------------------------------------

    def sorted_cell(self, d: int, z: int) -> tuple[np.ndarray, np.ndarray]:
        """Sorted cell values and their prefix sums (cached)."""
        key = (d, z)
        if key not in self._sorted:
            v = np.sort(self.cell_values(d, z))
            v.setflags(write=False)
            s = np.cumsum(v)
            s.setflags(write=False)
            self._sorted[key] = (v, s)
        return self._sorted[key]

    def joint_cdf_grid(self, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Merged outcome grid of the two ``D = d`` cells with both sub-cdfs.

        Returns ``(grid, sub0, sub1)`` where ``subz[i] = P(Y <= grid[i],
        D=d | Z=z)``.  Cached; this is the workhorse grid for every cdf
        envelope computation.
        """
        if d not in self._joint:
            self.require_both_arms()
            v0, _ = self.sorted_cell(d, 0)
            v1, _ = self.sorted_cell(d, 1)
            grid = np.union1d(v0, v1)
            sub0 = np.searchsorted(v0, grid, side="right") / self._arm_n[0]
            sub1 = np.searchsorted(v1, grid, side="right") / self._arm_n[1]
            for a in (grid, sub0, sub1):
                a.setflags(write=False)
            self._joint[d] = (grid, sub0, sub1)
        return self._joint[d]


def _as_binary(a: np.ndarray, exc: type, what: str) -> np.ndarray:
    vals = np.asarray(a, dtype=np.float64)
    ok = (vals == 0.0) | (vals == 1.0)
    if not ok.all():
        raise exc(f"non-binary {what} in row {int(np.argmax(~ok)) + 1}")
    return vals.astype(np.int8)


def load_csv(path, columns: dict[str, str] | None = None,
             outcome_kind: str = "auto") -> Sample:
    """Read a dataset from CSV.

    Parameters
    ----------
    path : str or path-like
        UTF-8 CSV file with a header row.
    columns : dict, optional
        Map from roles to column names, e.g. ``{"y": "lwage", "d":
        "college", "z": "nearc4"}``.  Defaults to literal ``y``, ``d``,
        ``z``.
    outcome_kind : str
        Passed through to :class:`Sample`.

    Raises
    ------
    MissingColumnError, NonBinaryTreatmentError, NonBinaryInstrumentError,
    NonFiniteOutcomeError
        Each validation error names the first offending data row
        (1-based).  Rows with missing values are a hard error, never
        silently dropped.
    """
    names = {"y": "y", "d": "d", "z": "z"}
    if columns:
        names.update(columns)
    frame = pd.read_csv(path)
    for role in ("y", "d", "z"):
        if names[role] not in frame.columns:
            raise MissingColumnError(f"column {names[role]!r} not found in {path}")
    y = frame[names["y"]].to_numpy(dtype=np.float64, na_value=np.nan)
    d = frame[names["d"]].to_numpy(dtype=np.float64, na_value=np.nan)
    z = frame[names["z"]].to_numpy(dtype=np.float64, na_value=np.nan)
    return Sample(y, d, z, outcome_kind=outcome_kind)


@dataclass(frozen=True)
class CellStats:
    """Per-cell probabilities, moments, and counts.

    All arrays are indexed ``[d, z]``.  ``cond_mean`` is NaN when the cell
    is empty; ``has_cell`` flags availability.
    """

    count: np.ndarray       # n(d, z)
    arm_size: np.ndarray    # n(z), indexed [z]
    prob: np.ndarray        # P(D=d | Z=z)
    joint_mean: np.ndarray  # E[Y 1{D=d} | Z=z]
    cond_mean: np.ndarray   # E[Y | D=d, Z=z]
    arm_mean_y: np.ndarray  # E[Y | Z=z]

    @property
    def has_cell(self) -> np.ndarray:
        return self.count > 0

    @property
    def first_stage(self) -> float:
        """E[D | Z=1] - E[D | Z=0]."""
        return float(self.prob[1, 1] - self.prob[1, 0])

    @property
    def itt(self) -> float:
        """E[Y | Z=1] - E[Y | Z=0]."""
        return float(self.arm_mean_y[1] - self.arm_mean_y[0])

    @property
    def iv_estimand(self) -> float:
        """Ratio of intent-to-treat effect to first stage (NaN when undefined)."""
        fs = self.first_stage
        return float("nan") if fs == 0 else self.itt / fs


def cell_stats(sample: Sample) -> CellStats:
    """Compute cell counts, conditional probabilities, and means.

    Requires both instrument arms to be nonempty.
    """
    sample.require_both_arms()
    count = np.zeros((2, 2), dtype=np.int64)
    prob = np.zeros((2, 2))
    joint_mean = np.zeros((2, 2))
    cond_mean = np.full((2, 2), np.nan)
    arm_size = np.array([sample.arm_size(0), sample.arm_size(1)], dtype=np.int64)
    arm_mean_y = np.zeros(2)
    for z in (0, 1):
        arm_mean_y[z] = sample.y[sample.z == z].mean()
        for d in (0, 1):
            vals = sample.cell_values(d, z)
            count[d, z] = vals.size
            prob[d, z] = vals.size / arm_size[z]
            joint_mean[d, z] = vals.sum() / arm_size[z]
            if vals.size:
                cond_mean[d, z] = vals.mean()
    for a in (count, prob, joint_mean, cond_mean, arm_size, arm_mean_y):
        a.setflags(write=False)
    return CellStats(count, arm_size, prob, joint_mean, cond_mean, arm_mean_y)


def subdistribution(sample: Sample, y: float, d: int, z: int) -> float:
    """Empirical joint probability ``P(Y <= y, D = d | Z = z)``.

    Right-continuous and nondecreasing in ``y``; equals ``P(D=d | Z=z)``
    above the sample maximum and 0 below the minimum.
    """
    if sample.arm_size(z) == 0:
        raise EmptyInstrumentArmError(f"no observations with Z={z}")
    v, _ = sample.sorted_cell(d, z)
    return float(np.searchsorted(v, y, side="right") / sample.arm_size(z))


def require_cell(sample: Sample, d: int, z: int) -> np.ndarray:
    """Cell values, raising :class:`EmptyCellError` when the cell is empty."""
    vals = sample.cell_values(d, z)
    if vals.size == 0:
        raise EmptyCellError(f"cell (D={d}, Z={z}) is empty")
    return vals
