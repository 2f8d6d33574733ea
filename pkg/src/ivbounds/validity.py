"""Testable implications that gate each assumption menu.

Two statistics drive every menu decision:

* the two one-sided inequality slacks
  ``sup_A { P(Y in A, D=s | Z=1-s) - P(Y in A, D=s | Z=s) }``, one per
  treatment arm ``s``.  The supremum over Borel sets is attained on the set
  where the density difference is positive, so it equals the integral of
  the positive part of the difference: an exact sum over atoms for discrete
  outcomes, a binned sum otherwise.  Both slacks are zero exactly when the
  full assumption menu is compatible with the data.
* the density-overlap statistic
  ``max_d  integral sup_z f(y, d | z) dmu(y) - 1``, which must be
  nonpositive when exclusion and random assignment hold.

No inference is attached to either statistic: point estimates gate the
menus directly, and the binning for continuous outcomes is reported, not
absorbed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .data import Sample, cell_stats
from .empirics import binned_density, default_bin_edges
from .errors import DegenerateFirstStageError
from .sets import Interval

__all__ = [
    "ErCheck",
    "LateSlacks",
    "TAU_FS",
    "TAU_TEST",
    "exclusion_check",
    "joint_masses",
    "late_inequality_slack",
    "overlap_statistic",
]

#: Tolerance for "a testable implication holds" on exact/discrete arithmetic.
TAU_TEST = 1e-9

#: Tolerance for classifying the sign of the first stage.
TAU_FS = 1e-12


class LateSlacks(NamedTuple):
    """Positive-part integrals of the two joint-distribution differences."""

    slack_d0: float
    slack_d1: float

    @property
    def max(self) -> float:
        return max(self.slack_d0, self.slack_d1)

    def hold(self, tol: float = TAU_TEST) -> bool:
        return self.max <= tol


def joint_masses(sample: Sample, bins: int | None = None) -> np.ndarray:
    """Joint masses ``P(Y in cell_k, D=d | Z=z)`` on a common carrier.

    Returns an array of shape ``(2, 2, K)`` indexed ``[d, z, k]``.  The
    carrier is the pooled support for discrete outcomes and a shared
    histogram grid otherwise.
    """
    sample.require_both_arms()
    edges = None
    if sample.outcome_kind != "discrete":
        edges = default_bin_edges(sample, bins)
    rows = {}
    for d in (0, 1):
        for z in (0, 1):
            rows[(d, z)] = binned_density(sample, d, z, edges=edges).masses
    k = rows[(0, 0)].size
    out = np.zeros((2, 2, k))
    for (d, z), m in rows.items():
        out[d, z] = m
    return out


def late_inequality_slack(sample: Sample, bins: int | None = None) -> LateSlacks:
    """Largest violation of the one-sided joint-distribution inequalities.

    ``slack_ds`` is the supremum over Borel sets of
    ``P(Y in A, D=s | Z=1-s) - P(Y in A, D=s | Z=s)``, always nonnegative
    and zero exactly when the two joint subdistributions coincide.  The
    full menu is data-consistent only if both slacks vanish.
    """
    masses = joint_masses(sample, bins)
    slack = [0.0, 0.0]
    for s in (0, 1):
        diff = masses[s, 1 - s] - masses[s, s]
        slack[s] = float(np.sum(diff[diff > 0]))
    return LateSlacks(slack_d0=slack[0], slack_d1=slack[1])


def overlap_statistic(sample: Sample, bins: int | None = None) -> float:
    """Excess mass of the pointwise-largest joint density over one.

    Nonpositive whenever random assignment and exclusion both hold; a
    strictly positive value refutes that menu.  Exact for discrete
    outcomes; the binned value for continuous outcomes depends on the grid,
    which callers control via ``bins``.
    """
    masses = joint_masses(sample, bins)
    per_d = np.max(masses, axis=1).sum(axis=1)  # integral of sup_z f, per d
    return float(per_d.max() - 1.0)


@dataclass(frozen=True)
class ErCheck:
    """Exclusion-restriction diagnostic built from the no-exclusion bounds.

    The instrument-off mean for treated always-takers (``mu_10a``) is point
    identified, while the instrument-on mean (``mu_11a``) is only bounded;
    exclusion forces them equal, so a point estimate outside its interval
    is evidence against exclusion.  Same logic for never-takers on the
    untreated side.
    """

    mu_10a: float
    id_set_mu_11a: Interval
    mu_01n: float
    id_set_mu_00n: Interval
    reject_er: bool
    relabeled: bool


def exclusion_check(sample: Sample, tol: float = TAU_TEST) -> ErCheck:
    """Test whether the data are compatible with the exclusion restriction.

    Requires a nonzero first stage; with a negative first stage the
    instrument is relabeled internally and the roles of compliers and
    defiers swap.  Raises :class:`DegenerateFirstStageError` when the first
    stage is zero, because the check would collapse to an exact
    independence test.
    """
    from .bounds_a3 import mean_bounds_mon  # deferred: avoids an import cycle

    sample.require_both_arms()
    fs = cell_stats(sample).first_stage
    relabeled = False
    if abs(fs) <= TAU_FS:
        raise DegenerateFirstStageError(
            "first stage is zero; the exclusion check degenerates to an independence test"
        )
    if fs < 0:
        sample = sample.relabel_instrument()
        relabeled = True
    mb = mean_bounds_mon(sample)
    reject = not (
        mb.mu_11a.contains(mb.mu_10a, tol=tol) and mb.mu_00n.contains(mb.mu_01n, tol=tol)
    )
    return ErCheck(
        mu_10a=mb.mu_10a,
        id_set_mu_11a=mb.mu_11a,
        mu_01n=mb.mu_01n,
        id_set_mu_00n=mb.mu_00n,
        reject_er=reject,
        relabeled=relabeled,
    )
