"""Bounds under random assignment + monotonicity, with no exclusion.

Without exclusion the instrument may shift outcomes directly, so potential
outcomes are indexed by both treatment and instrument.  With a positive
first stage there are no defiers and the four observed cells identify:

* the instrument-off treated mean for always-takers and the
  instrument-on untreated mean for never-takers (pure cells, points);
* trimming bounds for their instrument-on / instrument-off counterparts
  (mixture cells, intervals), hence bounds on the two within-type direct
  effects and on the total complier effect;
* nothing about the remaining type-by-arm means beyond the outcome range.

This menu has no testable implication: its identified set is never empty.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bounds_a1 import _outcome_range
from .data import Sample, cell_stats
from .empirics import SteppedCdf, trimmed_mean
from .errors import EmptyCellError, MuOutOfBoundsWarning, NonPositiveFirstStageError
from .sets import AssumptionMenu, Entry, IdentifiedSet, Interval, TypeProbabilities
from .validity import TAU_FS

__all__ = [
    "A3Report",
    "IttIdentity",
    "MonCdfBounds",
    "MonMeanBounds",
    "direct_effect_bounds",
    "identified_set_a3",
    "itt_decomposition",
    "potential_cdf_bounds",
    "potential_mean_bounds",
]

_TYPES = ("a", "c", "df", "n")


def _require_positive_fs(sample: Sample) -> float:
    sample.require_both_arms()
    fs = cell_stats(sample).first_stage
    if fs <= TAU_FS:
        raise NonPositiveFirstStageError(
            f"first stage {fs:.3g} is not positive; relabel the instrument or "
            "use identified_set_a3, which handles all cases"
        )
    return fs


def _mon_probs(st) -> TypeProbabilities:
    return TypeProbabilities(
        p_a=float(st.prob[1, 0]),
        p_c=float(st.prob[1, 1] - st.prob[1, 0]),
        p_df=0.0,
        p_n=float(st.prob[0, 1]),
    )


@dataclass(frozen=True)
class MonCdfBounds:
    """Cdf-level identification at a positive first stage.

    Mixture cells give envelope bounds for the instrument-on always-taker
    and instrument-off never-taker cdfs; the pure cells are point
    identified.  Complier cdfs are affine transforms of the bounded ones,
    built by :meth:`complier_cdf`.
    """

    probs: TypeProbabilities
    f_11a_lb: SteppedCdf
    f_11a_ub: SteppedCdf
    f_00n_lb: SteppedCdf
    f_00n_ub: SteppedCdf
    f_10a: SteppedCdf
    f_01n: SteppedCdf
    _sample: Sample

    def complier_cdf(self, d: int, anchor: SteppedCdf) -> SteppedCdf:
        """Implied complier cdf of ``Y_{d, z=d}`` given an anchor cdf.

        ``d=1`` anchors on the instrument-on always-taker cdf, ``d=0`` on
        the instrument-off never-taker cdf.  Envelope-endpoint anchors can
        break monotonicity, so validation is off.
        """
        st = cell_stats(self._sample)
        pr = self.probs
        v, _ = self._sample.sorted_cell(d, d)
        grid = np.unique(np.concatenate([v, anchor.grid]))
        sub = np.searchsorted(v, grid, side="right") / self._sample.arm_size(d)
        weight = pr.p_a if d == 1 else pr.p_n
        vals = (sub - weight * anchor.on_grid(grid)) / pr.p_c
        return SteppedCdf(grid, vals, validate=False)


def potential_cdf_bounds(sample: Sample) -> MonCdfBounds:
    """Pointwise cdf bounds for the type-by-arm potential outcomes.

    Requires a strictly positive first stage and nonempty pure cells;
    raises :class:`EmptyCellError` when always- or never-takers have zero
    probability, in which case their bounds do not exist (the full
    identified set degrades those entries instead).
    """
    _require_positive_fs(sample)
    st = cell_stats(sample)
    pr = _mon_probs(st)
    if pr.p_a <= 0 or st.count[1, 0] == 0:
        raise EmptyCellError("no treated observations with Z=0: always-taker bounds undefined")
    if pr.p_n <= 0 or st.count[0, 1] == 0:
        raise EmptyCellError("no untreated observations with Z=1: never-taker bounds undefined")

    v11, _ = sample.sorted_cell(1, 1)
    g11 = np.unique(v11)
    sub11 = np.searchsorted(v11, g11, side="right") / sample.arm_size(1)
    f_11a_lb = SteppedCdf(g11, np.maximum(sub11 - pr.p_c, 0.0) / pr.p_a)
    f_11a_ub = SteppedCdf(g11, np.minimum(sub11 / pr.p_a, 1.0))

    v00, _ = sample.sorted_cell(0, 0)
    g00 = np.unique(v00)
    sub00 = np.searchsorted(v00, g00, side="right") / sample.arm_size(0)
    f_00n_lb = SteppedCdf(g00, np.maximum(sub00 - pr.p_c, 0.0) / pr.p_n)
    f_00n_ub = SteppedCdf(g00, np.minimum(sub00 / pr.p_n, 1.0))

    return MonCdfBounds(
        probs=pr,
        f_11a_lb=f_11a_lb,
        f_11a_ub=f_11a_ub,
        f_00n_lb=f_00n_lb,
        f_00n_ub=f_00n_ub,
        f_10a=SteppedCdf.from_values(sample.cell_values(1, 0)),
        f_01n=SteppedCdf.from_values(sample.cell_values(0, 1)),
        _sample=sample,
    )


@dataclass(frozen=True)
class MonMeanBounds:
    """Mean-level identification at a positive first stage.

    ``alpha`` and ``gamma`` are the trimming shares of the two mixture
    cells: the always-taker share of the treated instrument-on cell and
    the never-taker share of the untreated instrument-off cell.
    """

    probs: TypeProbabilities
    alpha: float
    gamma: float
    mu_10a: float
    mu_01n: float
    mu_11a: Interval
    mu_00n: Interval
    mu_11c: Interval
    mu_00c: Interval


def potential_mean_bounds(sample: Sample) -> MonMeanBounds:
    """Means of the type-by-arm potential outcomes: points and intervals.

    The bounded means are tail means of the mixture cells at the trimming
    shares; the complier means follow from the mixture algebra and are
    decreasing in the bounded means, so their intervals flip endpoints.
    """
    _require_positive_fs(sample)
    st = cell_stats(sample)
    pr = _mon_probs(st)
    if pr.p_a <= 0 or st.count[1, 0] == 0:
        raise EmptyCellError("no treated observations with Z=0: always-taker bounds undefined")
    if pr.p_n <= 0 or st.count[0, 1] == 0:
        raise EmptyCellError("no untreated observations with Z=1: never-taker bounds undefined")

    alpha = pr.p_a / float(st.prob[1, 1])
    gamma = pr.p_n / float(st.prob[0, 0])
    mu_11a = Interval(
        trimmed_mean(sample, 1, 1, alpha, "lower"),
        trimmed_mean(sample, 1, 1, alpha, "upper"),
    )
    mu_00n = Interval(
        trimmed_mean(sample, 0, 0, gamma, "lower"),
        trimmed_mean(sample, 0, 0, gamma, "upper"),
    )

    def complier(joint_mean, cell_prob, weight, bound):
        lo = (joint_mean - weight * bound.hi) / (cell_prob - weight)
        hi = (joint_mean - weight * bound.lo) / (cell_prob - weight)
        return Interval(float(lo), float(hi))

    mu_11c = complier(st.joint_mean[1, 1], st.prob[1, 1], pr.p_a, mu_11a)
    mu_00c = complier(st.joint_mean[0, 0], st.prob[0, 0], pr.p_n, mu_00n)
    return MonMeanBounds(
        probs=pr,
        alpha=alpha,
        gamma=gamma,
        mu_10a=float(st.cond_mean[1, 0]),
        mu_01n=float(st.cond_mean[0, 1]),
        mu_11a=mu_11a,
        mu_00n=mu_00n,
        mu_11c=mu_11c,
        mu_00c=mu_00c,
    )


# kept as an alias for internal callers (validity imports this name)
mean_bounds_mon = potential_mean_bounds


@dataclass(frozen=True)
class A3Report:
    """Headline objects under this menu: shares, anchors, effect intervals.

    ``delta_1a_bounds`` is the always-taker direct effect interval (a shift
    of the instrument-on mean interval), ``delta_0n_bounds`` the
    never-taker one (a reflection), and ``total_c_bounds`` the total
    complier effect combining the treatment effect at one instrument arm
    with the direct effect at the other.
    """

    probs: TypeProbabilities
    mu_10a: float
    mu_01n: float
    mu_11a_bounds: Interval
    mu_00n_bounds: Interval
    delta_1a_bounds: Interval
    delta_0n_bounds: Interval
    total_c_bounds: Interval
    itt: float


def direct_effect_bounds(sample: Sample,
                         outcome_range: tuple[float, float] | None = None) -> A3Report:
    """Sharp bounds on the identifiable direct-effect parameters.

    ``outcome_range`` is accepted for interface symmetry; the reported
    intervals depend only on the observed cells.
    """
    mb = potential_mean_bounds(sample)
    st = cell_stats(sample)
    return A3Report(
        probs=mb.probs,
        mu_10a=mb.mu_10a,
        mu_01n=mb.mu_01n,
        mu_11a_bounds=mb.mu_11a,
        mu_00n_bounds=mb.mu_00n,
        delta_1a_bounds=mb.mu_11a.shift(-mb.mu_10a),
        delta_0n_bounds=mb.mu_00n.reflect(mb.mu_01n),
        total_c_bounds=Interval(mb.mu_11c.lo - mb.mu_00c.hi, mb.mu_11c.hi - mb.mu_00c.lo),
        itt=st.itt,
    )


class IttIdentity(NamedTuple):
    """Both sides of the intent-to-treat decomposition."""

    lhs: float
    rhs: float


def itt_decomposition(sample: Sample, mu_11a: float, mu_00n: float) -> IttIdentity:
    """Intent-to-treat effect as a type-share-weighted sum of direct effects.

    For any candidate ``(mu_11a, mu_00n)`` the weighted sum
    ``p_a*delta_1a + p_n*delta_0n + p_c*(delta_1c + theta_0c)`` collapses
    to the intent-to-treat effect: the candidate means cancel
    algebraically.  Candidates outside their identified intervals only
    trigger a warning, since the identity itself is unconditional.
    """
    mb = potential_mean_bounds(sample)
    st = cell_stats(sample)
    if not (mb.mu_11a.contains(mu_11a, tol=1e-12) and mb.mu_00n.contains(mu_00n, tol=1e-12)):
        warnings.warn(
            "candidate means lie outside their identified intervals",
            MuOutOfBoundsWarning,
            stacklevel=2,
        )
    pr = mb.probs
    delta_1a = mu_11a - mb.mu_10a
    delta_0n = mb.mu_01n - mu_00n
    mu_11c = (st.joint_mean[1, 1] - pr.p_a * mu_11a) / pr.p_c
    mu_00c = (st.joint_mean[0, 0] - pr.p_n * mu_00n) / pr.p_c
    rhs = pr.p_a * delta_1a + pr.p_n * delta_0n + pr.p_c * (mu_11c - mu_00c)
    return IttIdentity(lhs=float(st.itt), rhs=float(rhs))


def identified_set_a3(sample: Sample,
                      outcome_range: tuple[float, float] | None = None) -> IdentifiedSet:
    """Identified set for all twenty components under this menu.

    Handles every first-stage case (relabeling internally when negative)
    and degrades entries to the outcome-range bracket when a pure cell is
    empty.  The result is never empty.
    """
    sample.require_both_arms()
    fs = cell_stats(sample).first_stage
    if fs > TAU_FS:
        return _positive_fs_set(sample, outcome_range, "A3.1")
    if fs < -TAU_FS:
        flipped = _positive_fs_set(sample.relabel_instrument(), outcome_range, "A3.2")
        return flipped.relabel_instrument()
    return _zero_fs_set(sample, outcome_range)


def _entry_sub(a: Entry, b: Entry) -> Entry:
    """Entry for ``x - y`` with ``x in a`` and ``y in b`` varying freely."""
    lo, hi = a.lo - b.hi, a.hi - b.lo
    if a.kind == b.kind == "point":
        return Entry.point(lo)
    if a.kind == b.kind == "full_range":
        return Entry.full_range(lo, hi)
    return Entry.interval(lo, hi)


def _mu_matrix_positive_fs(sample: Sample, y_lo: float, y_hi: float):
    """Entries for the sixteen type-by-arm means at a positive first stage.

    When a pure cell is empty the corresponding type has zero probability:
    its entries stay at the outcome-range bracket and the matching mixture
    cell point-identifies the complier mean instead.
    """
    st = cell_stats(sample)
    pr = _mon_probs(st)
    full = Entry.full_range(y_lo, y_hi)
    mu = {f"{d}{z}{t}": full for d in "01" for z in "01" for t in _TYPES}

    if st.count[1, 0] > 0:  # always-takers present
        share = pr.p_a / float(st.prob[1, 1])
        b = Interval(
            trimmed_mean(sample, 1, 1, share, "lower"),
            trimmed_mean(sample, 1, 1, share, "upper"),
        )
        mu["11a"] = Entry.interval(b.lo, b.hi)
        mu["10a"] = Entry.point(float(st.cond_mean[1, 0]))
        mu["11c"] = _complier_entry(st.joint_mean[1, 1], st.prob[1, 1], pr.p_a, b)
    else:
        mu["11c"] = Entry.point(float(st.cond_mean[1, 1]))

    if st.count[0, 1] > 0:  # never-takers present
        share = pr.p_n / float(st.prob[0, 0])
        b = Interval(
            trimmed_mean(sample, 0, 0, share, "lower"),
            trimmed_mean(sample, 0, 0, share, "upper"),
        )
        mu["00n"] = Entry.interval(b.lo, b.hi)
        mu["01n"] = Entry.point(float(st.cond_mean[0, 1]))
        mu["00c"] = _complier_entry(st.joint_mean[0, 0], st.prob[0, 0], pr.p_n, b)
    else:
        mu["00c"] = Entry.point(float(st.cond_mean[0, 0]))
    return mu, pr


def _complier_entry(joint_mean, cell_prob, weight, bound: Interval) -> Entry:
    lo = (joint_mean - weight * bound.hi) / (cell_prob - weight)
    hi = (joint_mean - weight * bound.lo) / (cell_prob - weight)
    return Entry.interval(float(lo), float(hi))


def _assemble(mu: dict[str, Entry], pr: TypeProbabilities, tag: str,
              extra_constraints: list[str]) -> IdentifiedSet:
    out: dict[str, Entry] = {}
    for z in "01":
        for t in _TYPES:
            out[f"theta_{z}{t}"] = _entry_sub(mu[f"1{z}{t}"], mu[f"0{z}{t}"])
    for d in "01":
        for t in _TYPES:
            out[f"delta_{d}{t}"] = _entry_sub(mu[f"{d}1{t}"], mu[f"{d}0{t}"])
    out["p_a"] = Entry.point(pr.p_a)
    out["p_c"] = Entry.point(pr.p_c)
    out["p_df"] = Entry.point(pr.p_df)
    out["p_n"] = Entry.point(pr.p_n)
    return IdentifiedSet(out, AssumptionMenu.RA_MON, tag, extra_constraints)


def _positive_fs_set(sample: Sample, outcome_range, tag: str) -> IdentifiedSet:
    y_lo, y_hi = _outcome_range(sample, outcome_range)
    mu, pr = _mu_matrix_positive_fs(sample, y_lo, y_hi)
    constraints = []
    total = _entry_sub(mu["11c"], mu["00c"])
    if total.kind != "full_range":
        constraints.append(
            f"delta_1c+theta_0c=delta_0c+theta_1c in [{total.lo:.6g}, {total.hi:.6g}]"
        )
    return _assemble(mu, pr, tag, constraints)


def _zero_fs_set(sample: Sample, outcome_range) -> IdentifiedSet:
    st = cell_stats(sample)
    y_lo, y_hi = _outcome_range(sample, outcome_range)
    full = Entry.full_range(y_lo, y_hi)
    mu = {f"{d}{z}{t}": full for d in "01" for z in "01" for t in _TYPES}
    for key, (d, z) in (("10a", (1, 0)), ("11a", (1, 1)), ("01n", (0, 1)), ("00n", (0, 0))):
        if st.count[d, z]:
            mu[key] = Entry.point(float(st.cond_mean[d, z]))
    mean_d = float(np.mean(sample.d))
    pr = TypeProbabilities(mean_d, 0.0, 0.0, 1.0 - mean_d)
    return _assemble(mu, pr, "A3.3", [])
