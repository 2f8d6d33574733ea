"""Bounds under random assignment + exclusion, with no monotonicity.

Dropping monotonicity leaves the defier share a free parameter.  The data
bound it from below by the largest one-sided inequality slack and from
above by ``min{E[D|Z=0], E[1-D|Z=1]}``, provided the density-overlap test
passes; otherwise the whole menu is refuted.

For each admissible defier share the observed treated (untreated) cells
are two-component mixtures sharing the always-taker (never-taker)
distribution, which pins that distribution between explicit clipped and
shifted copies of the observed sub-cdfs.  Integrating the envelopes gives
sharp mean bounds; pushing the means through the mixture algebra gives the
complier and defier effect bounds, whose extremes sit at corner
combinations because the maps are affine with sign-definite coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bounds_a1 import identified_set_a1, _outcome_range
from .data import Sample, cell_stats
from .empirics import SteppedCdf, trimmed_mean
from .errors import (
    DefierShareNotInteriorError,
    EmptyIdentifiedSetError,
    InapplicableError,
    NotBinaryOutcomeError,
)
from .sets import AssumptionMenu, Entry, IdentifiedSet, Interval, TypeProbabilities
from .validity import TAU_FS, TAU_TEST, LateSlacks, late_inequality_slack, overlap_statistic

__all__ = [
    "A2Result",
    "A2Slice",
    "BinaryBounds",
    "CdfBounds",
    "DefierShareBound",
    "MeanBounds",
    "MixtureConstruction",
    "binary_bounds",
    "cdf_bounds_at",
    "defier_share_bounds",
    "identified_set_a2",
    "increment_feasible",
    "late_bounds_at",
    "mean_bounds_at",
    "mixture_construction",
]

#: Grid points with a derived type share below this are skipped (division guard).
EPS_P = 1e-10


@dataclass(frozen=True)
class DefierShareBound:
    """Bracket for the defier share plus the overlap verdict.

    ``lower``/``upper`` always carry the raw bracket endpoints so reports
    can show them even when the identified set is empty; :attr:`interval`
    is ``None`` in that case.
    """

    lower: float
    upper: float
    lower_source: str  # "slack_d0" | "slack_d1" | "zero"
    overlap_ok: bool
    overlap_stat: float
    slacks: LateSlacks

    @property
    def is_empty(self) -> bool:
        return (not self.overlap_ok) or self.lower > self.upper

    @property
    def interval(self) -> Interval | None:
        return None if self.is_empty else Interval(self.lower, self.upper)

    def is_interior(self, p_df: float) -> bool:
        return (not self.is_empty) and self.lower < p_df < self.upper


def defier_share_bounds(
    sample: Sample, bins: int | None = None, tol: float = TAU_TEST
) -> DefierShareBound:
    """Identified set for the defier share under this menu."""
    sample.require_both_arms()
    st = cell_stats(sample)
    slacks = late_inequality_slack(sample, bins)
    candidates = {"zero": 0.0, "slack_d0": slacks.slack_d0, "slack_d1": slacks.slack_d1}
    source = max(candidates, key=candidates.get)
    ov = overlap_statistic(sample, bins)
    return DefierShareBound(
        lower=candidates[source],
        upper=float(min(st.prob[1, 0], st.prob[0, 1])),
        lower_source=source,
        overlap_ok=ov <= tol,
        overlap_stat=ov,
        slacks=slacks,
    )


class MeanBounds(NamedTuple):
    """Mean intervals for treated always-takers and untreated never-takers."""

    mu_1a: Interval
    mu_0n: Interval


@dataclass(frozen=True)
class A2Slice:
    """Everything identified at one fixed defier share."""

    p_df: float
    probs: TypeProbabilities
    mu_1a: Interval
    mu_0n: Interval
    theta_c: Interval
    theta_df: Interval


class _Workspace:
    """Per-sample cache shared by every defier-share slice."""

    def __init__(self, sample: Sample):
        sample.require_both_arms()
        self.sample = sample
        self.st = cell_stats(sample)

    def derived_probs(self, p_df: float) -> TypeProbabilities:
        st = self.st
        p_a = float(st.prob[1, 0]) - p_df
        p_n = float(st.prob[0, 1]) - p_df
        p_c = 1.0 - p_df - p_a - p_n
        return TypeProbabilities(p_a=max(p_a, 0.0), p_c=max(p_c, 0.0),
                                 p_df=p_df, p_n=max(p_n, 0.0))

    def _side(self, d: int, p: float):
        """Grid, sub-cdfs, and mixture shifts for the ``D = d`` cells.

        ``p`` is the share of the common mixture component (always-takers
        on the treated side, never-takers on the untreated side).  The
        shift for arm ``z`` is the share of the other component mixed into
        that arm's cell, i.e. ``P(D=d|Z=z) - p``.
        """
        grid, sub0, sub1 = self.sample.joint_cdf_grid(d)
        shift0 = float(self.st.prob[d, 0]) - p
        shift1 = float(self.st.prob[d, 1]) - p
        return grid, (sub0, sub1), (shift0, shift1)

    def sharp_mu(self, d: int, p: float) -> Interval:
        """Mean interval from integrating the envelope cdf bounds."""
        grid, subs, shifts = self._side(d, p)
        ub = np.minimum(np.minimum(subs[0], subs[1]), p) / p
        lb = np.maximum(np.maximum(subs[0] - shifts[0], subs[1] - shifts[1]), 0.0) / p
        # the pointwise-upper cdf has the smaller mean
        return Interval(_grid_mean(grid, ub), _grid_mean(grid, lb))

    def outer_mu(self, d: int, p: float) -> Interval:
        """Mean interval from the per-arm trimmed means (closed forms)."""
        lows, highs = [], []
        for z in (0, 1):
            share = p / float(self.st.prob[d, z])
            lows.append(trimmed_mean(self.sample, d, z, share, "lower"))
            highs.append(trimmed_mean(self.sample, d, z, share, "upper"))
        return Interval(max(lows), min(highs))

    def mixture_means(self, p_df: float, mu_1a: float, mu_0n: float):
        """Complier/defier means implied by candidate component means."""
        st, pr = self.st, self.derived_probs(p_df)
        mu_1c = (st.joint_mean[1, 1] - pr.p_a * mu_1a) / (st.prob[1, 1] - pr.p_a)
        mu_1df = (st.joint_mean[1, 0] - pr.p_a * mu_1a) / (st.prob[1, 0] - pr.p_a)
        mu_0c = (st.joint_mean[0, 0] - pr.p_n * mu_0n) / (st.prob[0, 0] - pr.p_n)
        mu_0df = (st.joint_mean[0, 1] - pr.p_n * mu_0n) / (st.prob[0, 1] - pr.p_n)
        return float(mu_1c), float(mu_0c), float(mu_1df), float(mu_0df)

    def theta_corners(self, p_df: float, mu_1a: Interval, mu_0n: Interval):
        """Effect intervals over the four corners of the mean rectangle.

        Both effects are affine in ``(mu_1a, mu_0n)`` with sign-definite
        coefficients, so the extrema over the rectangle sit at corners;
        enumerating them is exact, not an approximation.
        """
        t_c, t_df = [], []
        for a in (mu_1a.lo, mu_1a.hi):
            for n in (mu_0n.lo, mu_0n.hi):
                mu_1c, mu_0c, mu_1df, mu_0df = self.mixture_means(p_df, a, n)
                t_c.append(mu_1c - mu_0c)
                t_df.append(mu_1df - mu_0df)
        return Interval(min(t_c), max(t_c)), Interval(min(t_df), max(t_df))


def _grid_mean(grid: np.ndarray, values: np.ndarray) -> float:
    return float(np.dot(grid, np.diff(values, prepend=0.0)))


def _require_interior(db: DefierShareBound, p_df: float) -> None:
    if db.is_empty:
        raise EmptyIdentifiedSetError(
            "identified set is empty "
            f"(overlap statistic {db.overlap_stat:.6g}, bracket [{db.lower:.6g}, {db.upper:.6g}])"
        )
    if not db.is_interior(p_df):
        raise DefierShareNotInteriorError(
            f"p_df = {p_df} is not interior to [{db.lower:.6g}, {db.upper:.6g}]"
        )


@dataclass(frozen=True)
class CdfBounds:
    """Envelope cdf bounds at a fixed defier share.

    The component cdfs for compliers and defiers are affine transforms of
    a chosen always-taker (never-taker) cdf; :meth:`component_cdf` builds
    them.  At an envelope endpoint the transform can fail monotonicity, so
    those curves skip cdf validation.
    """

    p_df: float
    probs: TypeProbabilities
    f_1a_lb: SteppedCdf
    f_1a_ub: SteppedCdf
    f_0n_lb: SteppedCdf
    f_0n_ub: SteppedCdf
    f_1a_lb_by_z: tuple[SteppedCdf, SteppedCdf]
    f_1a_ub_by_z: tuple[SteppedCdf, SteppedCdf]
    f_0n_lb_by_z: tuple[SteppedCdf, SteppedCdf]
    f_0n_ub_by_z: tuple[SteppedCdf, SteppedCdf]
    _sample: Sample

    def component_cdf(self, t: str, d: int, anchor: SteppedCdf) -> SteppedCdf:
        """Implied cdf for type ``t`` given an anchor cdf.

        ``t="c"``/``t="df"`` with ``d=1`` anchor on the treated
        always-taker cdf; with ``d=0`` on the untreated never-taker cdf.
        """
        st = cell_stats(self._sample)
        pr = self.probs
        z = {"c": {1: 1, 0: 0}, "df": {1: 0, 0: 1}}[t][d]
        weight = pr.p_a if d == 1 else pr.p_n
        denom = pr.p_c if t == "c" else pr.p_df
        grid, sub0, sub1 = self._sample.joint_cdf_grid(d)
        sub = sub1 if z == 1 else sub0
        vals = (sub - weight * anchor.on_grid(grid)) / denom
        return SteppedCdf(grid, vals, validate=False)


def cdf_bounds_at(
    sample: Sample, p_df: float, bins: int | None = None, tol: float = TAU_TEST
) -> CdfBounds:
    """Pointwise cdf bounds for the unobserved mixture components.

    Requires ``p_df`` strictly interior to the defier-share bracket, so all
    derived type shares are positive.
    """
    db = defier_share_bounds(sample, bins, tol)
    _require_interior(db, p_df)
    ws = _Workspace(sample)
    pr = ws.derived_probs(p_df)

    def curves(d: int, p: float):
        grid, subs, shifts = ws._side(d, p)
        ub_z = tuple(SteppedCdf(grid, np.minimum(subs[z], p) / p) for z in (0, 1))
        lb_z = tuple(
            SteppedCdf(grid, np.maximum(subs[z] - shifts[z], 0.0) / p) for z in (0, 1)
        )
        ub = SteppedCdf(grid, np.minimum(ub_z[0].values, ub_z[1].values))
        lb = SteppedCdf(grid, np.maximum(lb_z[0].values, lb_z[1].values))
        return lb, ub, lb_z, ub_z

    f_1a_lb, f_1a_ub, f_1a_lb_z, f_1a_ub_z = curves(1, pr.p_a)
    f_0n_lb, f_0n_ub, f_0n_lb_z, f_0n_ub_z = curves(0, pr.p_n)
    return CdfBounds(
        p_df=p_df,
        probs=pr,
        f_1a_lb=f_1a_lb,
        f_1a_ub=f_1a_ub,
        f_0n_lb=f_0n_lb,
        f_0n_ub=f_0n_ub,
        f_1a_lb_by_z=f_1a_lb_z,
        f_1a_ub_by_z=f_1a_ub_z,
        f_0n_lb_by_z=f_0n_lb_z,
        f_0n_ub_by_z=f_0n_ub_z,
        _sample=sample,
    )


def increment_feasible(
    sample: Sample,
    p_df: float,
    f_1a: SteppedCdf | None = None,
    f_0n: SteppedCdf | None = None,
    bins: int | None = None,
    tol: float = 1e-12,
) -> bool:
    """Membership check for the functional (increment-level) cdf constraints.

    A candidate component cdf must satisfy, on every grid interval
    ``(y, y']``, the same clipped mixture inequalities that the pointwise
    envelopes impose at single points.  The pointwise envelopes themselves
    can violate these increment constraints; this check is the only
    functional-level machinery offered, and no projection onto tighter
    mean bounds is attempted.
    """
    db = defier_share_bounds(sample, bins)
    _require_interior(db, p_df)
    ws = _Workspace(sample)
    pr = ws.derived_probs(p_df)
    ok = True
    for d, f, p in ((1, f_1a, pr.p_a), (0, f_0n, pr.p_n)):
        if f is None:
            continue
        grid, subs, shifts = ws._side(d, p)
        # index 0 stands for "below the grid" where every curve is 0, so
        # single-point (pointwise) constraints are the i=0 column of pairs
        padded_f = np.concatenate(([0.0], f.on_grid(grid)))
        pairs = np.triu_indices(padded_f.size, k=1)
        inc_f = padded_f[pairs[1]] - padded_f[pairs[0]]
        for sub, shift in zip(subs, shifts):
            padded_sub = np.concatenate(([0.0], sub))
            inc_sub = padded_sub[pairs[1]] - padded_sub[pairs[0]]
            upper = np.minimum(inc_sub / p, 1.0)
            lower = np.maximum(inc_sub - shift, 0.0) / p
            if np.any(inc_f > upper + tol) or np.any(inc_f < lower - tol):
                ok = False
    return ok


def mean_bounds_at(
    sample: Sample,
    p_df: float,
    method: str = "sharp",
    bins: int | None = None,
    tol: float = TAU_TEST,
) -> MeanBounds:
    """Mean bounds for the unobserved mixture components at one defier share.

    ``method="sharp"`` integrates the envelope cdfs; ``method="outer"``
    takes the best of the per-arm trimmed means, a valid outer interval
    that coincides with the sharp one exactly when one arm's curve
    stochastically dominates the other's.
    """
    if method not in ("sharp", "outer"):
        raise ValueError(f"method must be 'sharp' or 'outer', got {method!r}")
    db = defier_share_bounds(sample, bins, tol)
    _require_interior(db, p_df)
    ws = _Workspace(sample)
    pr = ws.derived_probs(p_df)
    fn = ws.sharp_mu if method == "sharp" else ws.outer_mu
    return MeanBounds(mu_1a=fn(1, pr.p_a), mu_0n=fn(0, pr.p_n))


def late_bounds_at(
    sample: Sample,
    p_df: float,
    method: str = "sharp",
    bins: int | None = None,
    tol: float = TAU_TEST,
) -> A2Slice:
    """Sharp effect bounds for compliers and defiers at one defier share."""
    mb = mean_bounds_at(sample, p_df, method, bins, tol)
    ws = _Workspace(sample)
    theta_c, theta_df = ws.theta_corners(p_df, mb.mu_1a, mb.mu_0n)
    return A2Slice(
        p_df=p_df,
        probs=ws.derived_probs(p_df),
        mu_1a=mb.mu_1a,
        mu_0n=mb.mu_0n,
        theta_c=theta_c,
        theta_df=theta_df,
    )


@dataclass
class A2Result:
    """Identified set for the whole parameter vector under this menu.

    ``slices`` holds one set per admissible grid point of the defier
    share; ``summary`` is the per-component union (interval hull) over the
    grid.  ``skipped`` lists grid points dropped because a derived type
    share fell below the division guard.
    """

    summary: IdentifiedSet
    slices: list[tuple[float, IdentifiedSet]]
    defier_bounds: DefierShareBound
    grid: np.ndarray
    skipped: list[float]

    @property
    def is_empty(self) -> bool:
        return self.summary.is_empty

    def band(self, name: str) -> np.ndarray:
        """Per-slice interval band for one component: columns (p_df, lo, hi)."""
        rows = [
            (p, s[name].lo, s[name].hi)
            for p, s in self.slices
            if not s.is_empty and not s[name].is_empty
        ]
        return np.asarray(rows, dtype=np.float64)


def identified_set_a2(
    sample: Sample,
    grid_points: int = 101,
    outcome_range: tuple[float, float] | None = None,
    bins: int | None = None,
    tol: float = TAU_TEST,
) -> A2Result:
    """Identified set under random assignment + exclusion, on a defier grid.

    The grid has ``grid_points`` evenly spaced interior points plus both
    endpoints of the defier-share bracket.  The endpoint with no defiers
    reduces to the full-menu set; the endpoint exhausting the bracket has
    its own boundary structure (three sub-cases depending on which cell
    probability binds).
    """
    sample.require_both_arms()
    menu = AssumptionMenu.RA_ER
    db = defier_share_bounds(sample, bins, tol)
    if db.is_empty:
        empty = IdentifiedSet.empty(menu, "A2.empty")
        return A2Result(empty, [], db, np.empty(0), [])

    ws = _Workspace(sample)
    y_lo, y_hi = _outcome_range(sample, outcome_range)
    if db.upper - db.lower <= TAU_FS:
        grid = np.array([db.lower])
    else:
        grid = np.linspace(db.lower, db.upper, grid_points + 2)

    slices: list[tuple[float, IdentifiedSet]] = []
    skipped: list[float] = []
    for p_df in grid:
        p_df = float(p_df)
        if p_df <= tol:
            s = identified_set_a1(sample, outcome_range, bins, tol)
            s = IdentifiedSet(s.entries, menu, "A2.2", list(s.linked_constraints))
        elif p_df >= db.upper - TAU_FS:
            s = _boundary_set(ws, y_lo, y_hi)
        else:
            pr = ws.derived_probs(p_df)
            if min(pr.p_a, pr.p_c, pr.p_n) < EPS_P:
                skipped.append(p_df)
                continue
            s = _interior_set(ws, p_df, y_lo, y_hi)
        if not s.is_empty:
            slices.append((p_df, s))

    if not slices:
        empty = IdentifiedSet.empty(menu, "A2.empty")
        return A2Result(empty, [], db, grid, skipped)
    summary_entries = {
        k: _hull_over(s[k] for _, s in slices) for k in slices[0][1].entries
    }
    summary = IdentifiedSet(summary_entries, menu, "A2.union",
                            ["union over admissible defier shares"])
    return A2Result(summary, slices, db, grid, skipped)


def _hull_over(entries) -> Entry:
    out = None
    for e in entries:
        out = e if out is None else out.hull(e)
    return out


def _interior_set(ws: _Workspace, p_df: float, y_lo: float, y_hi: float) -> IdentifiedSet:
    pr = ws.derived_probs(p_df)
    mu_1a = ws.sharp_mu(1, pr.p_a)
    mu_0n = ws.sharp_mu(0, pr.p_n)
    theta_c, theta_df = ws.theta_corners(p_df, mu_1a, mu_0n)
    out: dict[str, Entry] = {}
    theta_a = Entry.interval(mu_1a.lo - y_hi, mu_1a.hi - y_lo)
    theta_n = Entry.interval(y_lo - mu_0n.hi, y_hi - mu_0n.lo)
    for z in "01":
        out[f"theta_{z}a"] = theta_a
        out[f"theta_{z}c"] = Entry.interval(theta_c.lo, theta_c.hi)
        out[f"theta_{z}df"] = Entry.interval(theta_df.lo, theta_df.hi)
        out[f"theta_{z}n"] = theta_n
    _zero_deltas(out)
    _point_probs(out, pr)
    return IdentifiedSet(out, AssumptionMenu.RA_ER, "A2.1", [
        "theta_0a=theta_1a", "theta_0c=theta_1c",
        "theta_0df=theta_1df", "theta_0n=theta_1n",
    ])


def _boundary_set(ws: _Workspace, y_lo: float, y_hi: float) -> IdentifiedSet:
    """Boundary slice where the defier share exhausts its bracket."""
    st = ws.st
    ed0, en1 = float(st.prob[1, 0]), float(st.prob[0, 1])
    vacuous = Entry.full_range(y_lo - y_hi, y_hi - y_lo)
    out: dict[str, Entry] = {}

    if abs(ed0 - en1) <= TAU_FS:
        # both margins bind: no always- or never-takers at all
        tag = "A2.3.3"
        pr = TypeProbabilities(0.0, float(st.prob[1, 1]), ed0, 0.0)
        theta_c = Entry.point(float(st.cond_mean[1, 1] - st.cond_mean[0, 0]))
        theta_df = Entry.point(float(st.cond_mean[1, 0] - st.cond_mean[0, 1]))
        theta_a = theta_n = vacuous
    elif ed0 < en1:
        # always-takers vanish; treated cells identify complier/defier means
        tag = "A2.3.1"
        p_df = ed0
        pr = TypeProbabilities(0.0, float(st.prob[1, 1]), p_df, en1 - ed0)
        mu_0n = ws.sharp_mu(0, pr.p_n)
        mu_0c = [
            (st.joint_mean[0, 0] - pr.p_n * m) / (st.prob[0, 0] - pr.p_n)
            for m in (mu_0n.lo, mu_0n.hi)
        ]
        mu_0df = [
            (st.joint_mean[0, 1] - pr.p_n * m) / (st.prob[0, 1] - pr.p_n)
            for m in (mu_0n.lo, mu_0n.hi)
        ]
        theta_c = _anchored(st.cond_mean[1, 1], mu_0c)
        theta_df = _anchored(st.cond_mean[1, 0], mu_0df)
        theta_a = vacuous
        theta_n = Entry.interval(y_lo - mu_0n.hi, y_hi - mu_0n.lo)
    else:
        # never-takers vanish; untreated cells identify complier/defier means
        tag = "A2.3.2"
        p_df = en1
        pr = TypeProbabilities(ed0 - en1, float(st.prob[0, 0]), p_df, 0.0)
        mu_1a = ws.sharp_mu(1, pr.p_a)
        mu_1c = [
            (st.joint_mean[1, 1] - pr.p_a * m) / (st.prob[1, 1] - pr.p_a)
            for m in (mu_1a.lo, mu_1a.hi)
        ]
        mu_1df = [
            (st.joint_mean[1, 0] - pr.p_a * m) / (st.prob[1, 0] - pr.p_a)
            for m in (mu_1a.lo, mu_1a.hi)
        ]
        theta_c = _anchored_neg(mu_1c, st.cond_mean[0, 0])
        theta_df = _anchored_neg(mu_1df, st.cond_mean[0, 1])
        theta_a = Entry.interval(mu_1a.lo - y_hi, mu_1a.hi - y_lo)
        theta_n = vacuous

    for z in "01":
        out[f"theta_{z}a"] = theta_a
        out[f"theta_{z}c"] = theta_c
        out[f"theta_{z}df"] = theta_df
        out[f"theta_{z}n"] = theta_n
    _zero_deltas(out)
    _point_probs(out, pr)
    return IdentifiedSet(out, AssumptionMenu.RA_ER, tag, [
        "theta_0a=theta_1a", "theta_0c=theta_1c",
        "theta_0df=theta_1df", "theta_0n=theta_1n",
    ])


def _anchored(anchor: float, values: list[float]) -> Entry:
    if np.isnan(anchor):
        raise EmptyIdentifiedSetError("anchoring cell for a boundary slice is empty")
    vals = [anchor - v for v in values]
    return Entry.interval(min(vals), max(vals))


def _anchored_neg(values: list[float], anchor: float) -> Entry:
    if np.isnan(anchor):
        raise EmptyIdentifiedSetError("anchoring cell for a boundary slice is empty")
    vals = [v - anchor for v in values]
    return Entry.interval(min(vals), max(vals))


def _zero_deltas(out: dict[str, Entry]) -> None:
    for d in "01":
        for t in ("a", "c", "df", "n"):
            out[f"delta_{d}{t}"] = Entry.point(0.0)


def _point_probs(out: dict[str, Entry], pr: TypeProbabilities) -> None:
    out["p_a"] = Entry.point(pr.p_a)
    out["p_c"] = Entry.point(pr.p_c)
    out["p_df"] = Entry.point(pr.p_df)
    out["p_n"] = Entry.point(pr.p_n)


# --- binary outcomes --------------------------------------------------------

@dataclass(frozen=True)
class BinaryBounds:
    """Closed-form bounds for a binary outcome.

    With outcome support inside {0, 1} every Borel event reduces to the
    two atoms, so the defier-share bracket, the overlap test, and the mean
    bounds all have explicit finite forms.  They agree with the general
    machinery exactly on binary data.
    """

    defier_bounds: DefierShareBound
    joint: np.ndarray  # P(Y=y, D=d | Z=z), indexed [y, d, z]
    marg: np.ndarray   # P(D=d | Z=z), indexed [d, z]

    def mu_bounds_at(self, p_df: float) -> MeanBounds:
        """Closed-form mean intervals at one interior defier share."""
        _require_interior(self.defier_bounds, p_df)
        q = self.joint
        p_a = self.marg[1, 0] - p_df
        p_n = self.marg[0, 1] - p_df
        p_c = self.marg[1, 1] - p_a
        mu_1a = Interval(
            max((q[1, 1, 1] - p_c) / p_a, (q[1, 1, 0] - p_df) / p_a, 0.0),
            min(q[1, 1, 1] / p_a, q[1, 1, 0] / p_a, 1.0),
        )
        mu_0n = Interval(
            max((q[1, 0, 0] - p_c) / p_n, (q[1, 0, 1] - p_df) / p_n, 0.0),
            min(q[1, 0, 0] / p_n, q[1, 0, 1] / p_n, 1.0),
        )
        return MeanBounds(mu_1a=mu_1a, mu_0n=mu_0n)


def binary_bounds(sample: Sample, tol: float = TAU_TEST) -> BinaryBounds:
    """Closed-form defier-share and mean bounds for a binary outcome."""
    sample.require_both_arms()
    if sample.outcome_kind != "discrete" or not np.all(np.isin(sample.support, (0.0, 1.0))):
        raise NotBinaryOutcomeError("outcome support must be contained in {0, 1}")
    st = cell_stats(sample)
    q = np.zeros((2, 2, 2))
    for d in (0, 1):
        for z in (0, 1):
            vals = sample.cell_values(d, z)
            n_arm = sample.arm_size(z)
            q[1, d, z] = np.count_nonzero(vals == 1.0) / n_arm
            q[0, d, z] = np.count_nonzero(vals == 0.0) / n_arm
    marg = q[0] + q[1]

    overlap = max(
        max(q[0, d, 0], q[0, d, 1]) + max(q[1, d, 0], q[1, d, 1]) for d in (0, 1)
    ) - 1.0
    # positive-part sum over the two atoms, per treatment arm
    lower, source = 0.0, "zero"
    slack = [0.0, 0.0]
    for s in (0, 1):
        slack[s] = max(q[0, s, 1 - s] - q[0, s, s], 0.0) + max(q[1, s, 1 - s] - q[1, s, s], 0.0)
        if slack[s] > lower:
            lower, source = slack[s], f"slack_d{s}"
    db = DefierShareBound(
        lower=lower,
        upper=float(min(st.prob[1, 0], st.prob[0, 1])),
        lower_source=source,
        overlap_ok=overlap <= tol,
        overlap_stat=float(overlap),
        slacks=LateSlacks(slack_d0=slack[0], slack_d1=slack[1]),
    )
    return BinaryBounds(defier_bounds=db, joint=q, marg=marg)


# --- mixture construction ---------------------------------------------------

@dataclass(frozen=True)
class MixtureConstruction:
    """Explicit type distributions reproducing the observed cells.

    Exists whenever both inequality slacks vanish and the first stage is
    nonnegative; mixing the constructed cdfs with the constructed shares
    returns every observed joint subdistribution exactly, which certifies
    that the no-defier corner of the identified set is attainable.
    """

    probs: TypeProbabilities
    cdfs: dict[tuple[int, str], SteppedCdf]  # (d, type) -> cdf of Y_d given type
    grid: np.ndarray

    def reconstructed_subdistribution(self, d: int, z: int) -> np.ndarray:
        """Mixture value of ``P(Y <= grid, D=d | Z=z)`` from the construction."""
        pr = self.probs
        parts = {
            (1, 1): (("c", pr.p_c), ("a", pr.p_a)),
            (1, 0): (("df", pr.p_df), ("a", pr.p_a)),
            (0, 1): (("df", pr.p_df), ("n", pr.p_n)),
            (0, 0): (("c", pr.p_c), ("n", pr.p_n)),
        }[(d, z)]
        out = np.zeros_like(self.grid)
        for t, w in parts:
            if w > 0.0:
                out += w * self.cdfs[(d, t)].on_grid(self.grid)
        return out


def mixture_construction(sample: Sample, bins: int | None = None,
                         tol: float = TAU_TEST) -> MixtureConstruction:
    """Construct no-defier type distributions matching the observed data.

    Raises :class:`InapplicableError` when an inequality slack is positive
    or the first stage is negative.
    """
    sample.require_both_arms()
    slacks = late_inequality_slack(sample, bins)
    st = cell_stats(sample)
    fs = st.first_stage
    if slacks.max > tol:
        raise InapplicableError(
            f"inequality slacks ({slacks.slack_d0:.3g}, {slacks.slack_d1:.3g}) are positive"
        )
    if fs < -TAU_FS:
        raise InapplicableError("first stage is negative; relabel the instrument first")

    grid = np.unique(sample.y)
    sub = {}
    for d in (0, 1):
        for z in (0, 1):
            v, _ = sample.sorted_cell(d, z)
            sub[(d, z)] = np.searchsorted(v, grid, side="right") / sample.arm_size(z)

    cdfs: dict[tuple[int, str], SteppedCdf] = {}
    if fs > TAU_FS:
        p_a, p_n = float(st.prob[1, 0]), float(st.prob[0, 1])
        probs = TypeProbabilities(p_a, fs, 0.0, p_n)
        if p_a > 0:
            cdfs[(1, "a")] = SteppedCdf(grid, sub[(1, 0)] / p_a)
            cdfs[(0, "a")] = SteppedCdf(grid, sub[(1, 0)] / p_a)
        if p_n > 0:
            cdfs[(0, "n")] = SteppedCdf(grid, sub[(0, 1)] / p_n)
            cdfs[(1, "n")] = SteppedCdf(grid, sub[(0, 1)] / p_n)
        cdfs[(1, "c")] = SteppedCdf(grid, (sub[(1, 1)] - sub[(1, 0)]) / fs)
        cdfs[(0, "c")] = SteppedCdf(grid, (sub[(0, 0)] - sub[(0, 1)]) / fs)
    else:
        # zero first stage with zero slacks: instrument independent of (Y, D)
        mean_d = float(np.mean(sample.d))
        probs = TypeProbabilities(mean_d, 0.0, 0.0, 1.0 - mean_d)
        pooled1 = np.searchsorted(np.sort(sample.y[sample.d == 1]), grid, "right")
        pooled0 = np.searchsorted(np.sort(sample.y[sample.d == 0]), grid, "right")
        if mean_d > 0:
            f1 = SteppedCdf(grid, pooled1 / np.count_nonzero(sample.d == 1))
            cdfs[(1, "a")] = cdfs[(0, "a")] = f1
        if mean_d < 1:
            f0 = SteppedCdf(grid, pooled0 / np.count_nonzero(sample.d == 0))
            cdfs[(0, "n")] = cdfs[(1, "n")] = f0
    return MixtureConstruction(probs=probs, cdfs=cdfs, grid=grid)
