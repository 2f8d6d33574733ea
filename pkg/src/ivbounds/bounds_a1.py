"""Identified set under the full menu: random assignment + exclusion + monotonicity.

With all three assumptions the type shares are point identified from the
first stage, the complier effect is the ratio of the intent-to-treat effect
to the first stage, and every treatment-controlled direct effect is zero.
The whole set is empty as soon as either one-sided joint-distribution
inequality is violated.  A negative first stage is handled by relabeling
the instrument and mapping the set back to original labels; a zero first
stage forces both compliers and defiers out of the population.
"""
from __future__ import annotations

import numpy as np

from .data import Sample, cell_stats
from .sets import AssumptionMenu, Entry, IdentifiedSet, TypeProbabilities
from .validity import TAU_FS, TAU_TEST, late_inequality_slack

__all__ = ["identified_set_a1", "type_probabilities_a1"]

_LINKED = [
    "theta_0a=theta_1a",
    "theta_0c=theta_1c",
    "theta_0df=theta_1df",
    "theta_0n=theta_1n",
]


def type_probabilities_a1(sample: Sample) -> TypeProbabilities:
    """Type shares implied by monotonicity, oriented to a nonnegative first stage.

    With a positive first stage there are no defiers and
    ``(p_a, p_c, 0, p_n) = (E[D|Z=0], E[D|Z=1]-E[D|Z=0], 0, E[1-D|Z=1])``.
    With a negative first stage the shares refer to the relabeled
    instrument (compliers and defiers trade places), and with a zero first
    stage both shares vanish and ``p_a = E[D]``.
    """
    sample.require_both_arms()
    st = cell_stats(sample)
    fs = st.first_stage
    if fs > TAU_FS:
        return TypeProbabilities(
            p_a=float(st.prob[1, 0]), p_c=fs, p_df=0.0, p_n=float(st.prob[0, 1])
        )
    if fs < -TAU_FS:
        return TypeProbabilities(
            p_a=float(st.prob[1, 1]), p_c=-fs, p_df=0.0, p_n=float(st.prob[0, 0])
        )
    mean_d = float(np.mean(sample.d))
    return TypeProbabilities(p_a=mean_d, p_c=0.0, p_df=0.0, p_n=1.0 - mean_d)


def identified_set_a1(
    sample: Sample,
    outcome_range: tuple[float, float] | None = None,
    bins: int | None = None,
    tol: float = TAU_TEST,
) -> IdentifiedSet:
    """Identified set for all twenty components under the full menu.

    Parameters
    ----------
    sample : Sample
        Dataset with both instrument arms nonempty.
    outcome_range : (float, float), optional
        Logical outcome range used for the vacuous brackets; defaults to
        the sample minimum and maximum.
    bins : int, optional
        Histogram bin count for the inequality slacks on continuous data.
    tol : float
        Tolerance below which an inequality slack counts as zero.  With a
        zero first stage the inequalities must hold exactly.

    Returns
    -------
    IdentifiedSet
        Empty when the data refute the menu.
    """
    sample.require_both_arms()
    fs = cell_stats(sample).first_stage
    menu = AssumptionMenu.RA_ER_MON

    if fs > TAU_FS:
        oriented, case_tag, flip = sample, "A1.1", False
    elif fs < -TAU_FS:
        oriented, case_tag, flip = sample.relabel_instrument(), "A1.2", True
    else:
        return _zero_first_stage_set(sample, outcome_range, bins)

    slacks = late_inequality_slack(oriented, bins)
    if slacks.max > tol:
        return IdentifiedSet.empty(menu, case_tag)

    out = _positive_first_stage_entries(oriented, outcome_range)
    result = IdentifiedSet(out, menu, case_tag, list(_LINKED))
    return result.relabel_instrument() if flip else result


def _outcome_range(sample: Sample, outcome_range) -> tuple[float, float]:
    if outcome_range is not None:
        lo, hi = float(outcome_range[0]), float(outcome_range[1])
        if lo > hi:
            raise ValueError(f"outcome range out of order: ({lo}, {hi})")
        return lo, hi
    return float(sample.y.min()), float(sample.y.max())


def _positive_first_stage_entries(sample: Sample, outcome_range) -> dict[str, Entry]:
    st = cell_stats(sample)
    y_lo, y_hi = _outcome_range(sample, outcome_range)
    fs = st.first_stage
    wald = st.itt / fs
    out: dict[str, Entry] = {}

    theta_a = _mean_shift_entry(st.cond_mean[1, 0], y_lo, y_hi, treated_cell=True)
    theta_n = _mean_shift_entry(st.cond_mean[0, 1], y_lo, y_hi, treated_cell=False)
    for z in "01":
        out[f"theta_{z}a"] = theta_a
        out[f"theta_{z}c"] = Entry.point(wald)
        out[f"theta_{z}df"] = Entry.full_range(y_lo - y_hi, y_hi - y_lo)
        out[f"theta_{z}n"] = theta_n
    for d in "01":
        for t in ("a", "c", "df", "n"):
            out[f"delta_{d}{t}"] = Entry.point(0.0)
    out["p_a"] = Entry.point(float(st.prob[1, 0]))
    out["p_c"] = Entry.point(fs)
    out["p_df"] = Entry.point(0.0)
    out["p_n"] = Entry.point(float(st.prob[0, 1]))
    return out


def _zero_first_stage_set(sample: Sample, outcome_range, bins) -> IdentifiedSet:
    # no compliers, no defiers; requires exact independence of Z and (Y, D)
    st = cell_stats(sample)
    y_lo, y_hi = _outcome_range(sample, outcome_range)
    slacks = late_inequality_slack(sample, bins)
    menu = AssumptionMenu.RA_ER_MON
    if slacks.max > 0.0:
        return IdentifiedSet.empty(menu, "A1.3")

    out: dict[str, Entry] = {}
    theta_a = _mean_shift_entry(st.cond_mean[1, 0], y_lo, y_hi, treated_cell=True)
    theta_n = _mean_shift_entry(st.cond_mean[0, 0], y_lo, y_hi, treated_cell=False)
    vacuous = Entry.full_range(y_lo - y_hi, y_hi - y_lo)
    for z in "01":
        out[f"theta_{z}a"] = theta_a
        out[f"theta_{z}c"] = vacuous
        out[f"theta_{z}df"] = vacuous
        out[f"theta_{z}n"] = theta_n
    for d in "01":
        for t in ("a", "c", "df", "n"):
            out[f"delta_{d}{t}"] = Entry.point(0.0)
    mean_d = float(np.mean(sample.d))
    out["p_a"] = Entry.point(mean_d)
    out["p_c"] = Entry.point(0.0)
    out["p_df"] = Entry.point(0.0)
    out["p_n"] = Entry.point(1.0 - mean_d)
    return IdentifiedSet(out, menu, "A1.3", list(_LINKED))


def _mean_shift_entry(cell_mean: float, y_lo: float, y_hi: float,
                      treated_cell: bool) -> Entry:
    """Bracket for a type effect anchored at one observed cell mean.

    Treated anchor: ``[mean - sup Y, mean - inf Y]``; untreated anchor:
    ``[inf Y - mean, sup Y - mean]``.  Falls back to the vacuous bracket
    when the anchoring cell is empty (zero-probability type).
    """
    if np.isnan(cell_mean):
        return Entry.full_range(y_lo - y_hi, y_hi - y_lo)
    if treated_cell:
        return Entry.interval(cell_mean - y_hi, cell_mean - y_lo)
    return Entry.interval(y_lo - cell_mean, y_hi - cell_mean)
