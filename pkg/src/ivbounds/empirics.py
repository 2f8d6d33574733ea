"""Empirical primitives: step cdfs, quantiles, trimmed means, densities.

Every bound formula in the package reduces to arithmetic on empirical
(sub)distribution functions.  This module fixes the conventions once:

* quantiles are the left-continuous empirical inverse ``min{y: F(y) >= q}``;
* trimmed means give the boundary observation a fractional weight so the
  trimmed mass equals the requested share exactly, even with ties;
* step cdfs are right-continuous, evaluated on finite grids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Sample
from .errors import (
    BadBinEdgesError,
    EmptyCellError,
    EmptyInstrumentArmError,
    NotAFullCdfError,
    QuantileOutOfRangeError,
)

__all__ = [
    "BinnedDensity",
    "SteppedCdf",
    "binned_density",
    "cdf_envelope",
    "conditional_quantile",
    "default_bin_edges",
    "mean_of_cdf",
    "trimmed_mean",
]

_CDF_TOL = 1e-9


class SteppedCdf:
    """Right-continuous step function on a finite grid with values in [0, 1].

    ``values[i]`` is the function value on ``[grid[i], grid[i+1])``; the
    function is 0 below ``grid[0]``.  Sub-cdfs (total mass below one) are
    allowed and carry their mass in :attr:`total`.

    Parameters
    ----------
    grid, values : array_like
        Strictly increasing grid and the function values on it.
    validate : bool
        When true (default), requires nondecreasing values inside
        ``[0, 1]``.  Transform curves that are not themselves cdfs (for
        instance mixture remainders evaluated at an envelope endpoint) can
        switch validation off.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid, values, validate: bool = True):
        grid = np.ascontiguousarray(grid, dtype=np.float64)
        values = np.ascontiguousarray(values, dtype=np.float64)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size == 0:
            raise ValueError("grid and values must be equal-length 1-d arrays")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if validate:
            if np.any(np.diff(values) < -_CDF_TOL):
                raise ValueError("cdf values must be nondecreasing")
            if values[0] < -_CDF_TOL or values[-1] > 1 + _CDF_TOL:
                raise ValueError("cdf values must lie in [0, 1]")
            values = np.clip(values, 0.0, 1.0)
            values = np.maximum.accumulate(values)
        self.grid = grid
        self.values = values
        self.grid.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_values(cls, data, total: float = 1.0) -> "SteppedCdf":
        """Empirical (sub-)cdf of ``data`` with overall mass ``total``."""
        data = np.asarray(data, dtype=np.float64)
        if data.size == 0:
            raise ValueError("cannot build a cdf from no data")
        grid, counts = np.unique(data, return_counts=True)
        return cls(grid, np.cumsum(counts) * (total / data.size))

    @property
    def total(self) -> float:
        """Total mass (1 for a full cdf)."""
        return float(self.values[-1])

    def __call__(self, y):
        """Evaluate at scalar or array ``y`` (0 below the grid)."""
        idx = np.searchsorted(self.grid, y, side="right")
        padded = np.concatenate(([0.0], self.values))
        out = padded[idx]
        return float(out) if np.isscalar(y) else out

    def on_grid(self, grid: np.ndarray) -> np.ndarray:
        return self(np.asarray(grid, dtype=np.float64))

    def jumps(self) -> np.ndarray:
        """Mass at each grid point (first jump measured from 0)."""
        return np.diff(self.values, prepend=0.0)


def mean_of_cdf(f: SteppedCdf) -> float:
    """Mean of the step distribution described by a full cdf.

    Computed as ``sum grid_i * (F_i - F_{i-1})``.  Raises
    :class:`NotAFullCdfError` when the total mass is not 1.
    """
    if abs(f.total - 1.0) > _CDF_TOL:
        raise NotAFullCdfError(f"total mass {f.total} != 1")
    return float(np.dot(f.grid, f.jumps()))


def cdf_envelope(a: SteppedCdf, b: SteppedCdf, kind: str) -> SteppedCdf:
    """Pointwise min or max of two step cdfs on their merged grid.

    The pointwise max of two cdfs is again a cdf; the pointwise min is
    nondecreasing and ends at the smaller total.
    """
    if kind not in ("min", "max"):
        raise ValueError(f"kind must be 'min' or 'max', got {kind!r}")
    grid = np.union1d(a.grid, b.grid)
    va, vb = a.on_grid(grid), b.on_grid(grid)
    vals = np.minimum(va, vb) if kind == "min" else np.maximum(va, vb)
    return SteppedCdf(grid, vals)


def conditional_quantile(sample: Sample, d: int, z: int, q: float) -> float:
    """Empirical quantile ``min{y in cell: F_cell(y) >= q}`` of cell (d, z)."""
    if not 0.0 < q <= 1.0:
        raise QuantileOutOfRangeError(f"q = {q} outside (0, 1]")
    v, _ = sample.sorted_cell(d, z)
    if v.size == 0:
        raise EmptyCellError(f"cell (D={d}, Z={z}) is empty")
    # smallest index i with (i+1)/m >= q, guarded against float fuzz
    idx = int(math.ceil(q * v.size - 1e-9)) - 1
    return float(v[max(idx, 0)])


def trimmed_mean(sample: Sample, d: int, z: int, share: float, tail: str) -> float:
    """Mean of the extreme ``share`` fraction of cell (d, z).

    ``tail="lower"`` averages the smallest values, ``tail="upper"`` the
    largest.  The observation at the cutoff receives a fractional weight so
    the trimmed mass equals ``share`` exactly; with ``share = 1`` this is
    the plain cell mean.
    """
    if tail not in ("lower", "upper"):
        raise ValueError(f"tail must be 'lower' or 'upper', got {tail!r}")
    if not 0.0 < share <= 1.0:
        raise ValueError(f"share = {share} outside (0, 1]")
    v, prefix = sample.sorted_cell(d, z)
    m = v.size
    if m == 0:
        raise EmptyCellError(f"cell (D={d}, Z={z}) is empty")
    t = share * m
    k = min(int(t), m)  # whole observations in the tail
    frac = t - k
    if tail == "lower":
        s = (prefix[k - 1] if k else 0.0) + (frac * v[k] if k < m else 0.0)
    else:
        s = (prefix[m - 1] - (prefix[m - k - 1] if k < m else 0.0)) + (
            frac * v[m - k - 1] if k < m else 0.0
        )
    return float(s / t)


@dataclass(frozen=True)
class BinnedDensity:
    """Joint masses of ``(Y, D=d | Z=z)`` on a shared discrete carrier.

    Exactly one of ``atoms`` (discrete outcomes, exact) or ``edges``
    (continuous outcomes, histogram bins) is set.  Masses are nonnegative
    and sum to the cell probability ``P(D=d | Z=z)``.
    """

    masses: np.ndarray
    atoms: np.ndarray | None = None
    edges: np.ndarray | None = None

    def __post_init__(self):
        if (self.atoms is None) == (self.edges is None):
            raise ValueError("exactly one of atoms/edges must be given")
        if np.any(self.masses < -1e-15):
            raise ValueError("masses must be nonnegative")

    @property
    def total(self) -> float:
        return float(self.masses.sum())


def default_bin_edges(sample: Sample, bins: int | None = None) -> np.ndarray:
    """Shared histogram edges over the pooled outcome range.

    With ``bins=None`` the bin count follows the Freedman-Diaconis rule on
    the pooled outcome (falling back to Sturges when the IQR degenerates).
    A common grid across all four cells is required because the density
    tests compare cells bin by bin.
    """
    y = sample.y
    lo, hi = float(y.min()), float(y.max())
    if bins is None:
        q75, q25 = np.percentile(y, [75, 25])
        width = 2.0 * (q75 - q25) / y.size ** (1.0 / 3.0)
        if width <= 0 or hi <= lo:
            bins = max(1, int(np.ceil(np.log2(y.size))) + 1)
        else:
            bins = max(1, int(np.ceil((hi - lo) / width)))
    if bins < 1:
        raise BadBinEdgesError(f"bin count {bins} < 1")
    if hi == lo:
        hi = lo + 1.0  # single-atom outcome: one bin suffices
    return np.linspace(lo, hi, bins + 1)


def binned_density(sample: Sample, d: int, z: int, edges=None) -> BinnedDensity:
    """Discretized joint density of ``(Y, D=d)`` given ``Z=z``.

    For discrete outcomes the atoms of the pooled support carry the exact
    joint frequencies and ``edges`` is ignored; for continuous outcomes the
    masses are histogram counts on ``edges`` (defaulting to
    :func:`default_bin_edges`), normalized by the arm size.
    """
    if sample.arm_size(z) == 0:
        raise EmptyInstrumentArmError(f"no observations with Z={z}")
    vals = sample.cell_values(d, z)
    n_arm = sample.arm_size(z)
    if sample.outcome_kind == "discrete":
        atoms = sample.support
        idx = np.searchsorted(atoms, vals)
        masses = np.bincount(idx, minlength=atoms.size).astype(np.float64) / n_arm
        return BinnedDensity(masses, atoms=atoms)
    if edges is None:
        edges = default_bin_edges(sample)
    edges = np.asarray(edges, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise BadBinEdgesError("edges must be a strictly increasing 1-d array")
    if vals.size and (vals.min() < edges[0] or vals.max() > edges[-1]):
        raise BadBinEdgesError("edges do not cover the cell's outcome range")
    counts, _ = np.histogram(vals, bins=edges)
    return BinnedDensity(counts.astype(np.float64) / n_arm, edges=edges)
