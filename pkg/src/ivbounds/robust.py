"""Misspecification-robust bound over the three assumption menus.

A menu is data-consistent when its identified set is nonempty.  The
robust bound is the union of the identified sets of all *minimum*
data-consistent relaxations: the full menu if it survives the data;
otherwise both one-assumption-weaker menus, except that the
no-exclusion menu stands alone when the overlap test also fails.
Exactly one branch fires, and the result is never empty because the
no-exclusion menu has no testable implication.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .bounds_a1 import identified_set_a1
from .bounds_a2 import A2Result, identified_set_a2
from .bounds_a3 import identified_set_a3
from .data import Sample, cell_stats
from .sets import AssumptionMenu, Entry, IdentifiedSet
from .validity import TAU_FS, TAU_TEST, late_inequality_slack, overlap_statistic

__all__ = ["RobustBound", "robust_bound"]


@dataclass
class RobustBound:
    """Per-component union of the active menus' identified sets.

    ``entries`` holds one interval hull per component; components whose
    active intervals do not touch are listed in ``disconnected`` (the hull
    then overstates the union, which is flagged rather than hidden).
    ``diagnostics`` records the statistics the branch decision used.
    """

    entries: dict[str, Entry]
    active_menus: tuple[AssumptionMenu, ...]
    disconnected: frozenset[str]
    diagnostics: dict[str, float | str]
    menu_sets: dict[AssumptionMenu, IdentifiedSet] = field(default_factory=dict)
    a2_detail: A2Result | None = None


def robust_bound(
    sample: Sample,
    outcome_range: tuple[float, float] | None = None,
    grid_points: int = 101,
    bins: int | None = None,
    tol: float = TAU_TEST,
) -> RobustBound:
    """Compute the misspecification-robust bound.

    Branches on emptiness alone: the full menu's set when nonempty, else
    the union of the two weaker menus' sets, else the never-empty
    no-exclusion set.  Rerunning on the same inputs is deterministic.
    """
    sample.require_both_arms()
    st = cell_stats(sample)
    slacks = late_inequality_slack(sample, bins)
    overlap = overlap_statistic(sample, bins)
    fs = st.first_stage
    diagnostics: dict[str, float | str] = {
        "slack_d0": slacks.slack_d0,
        "slack_d1": slacks.slack_d1,
        "overlap_statistic": overlap,
        "first_stage": fs,
        "first_stage_case": "+" if fs > TAU_FS else ("-" if fs < -TAU_FS else "0"),
        "tau_test": tol,
    }

    a1 = identified_set_a1(sample, outcome_range, bins, tol)
    menu_sets: dict[AssumptionMenu, IdentifiedSet] = {AssumptionMenu.RA_ER_MON: a1}
    if not a1.is_empty:
        diagnostics["branch"] = "A1"
        return RobustBound(
            entries=dict(a1.entries),
            active_menus=(AssumptionMenu.RA_ER_MON,),
            disconnected=frozenset(),
            diagnostics=diagnostics,
            menu_sets=menu_sets,
        )

    a3 = identified_set_a3(sample, outcome_range)
    menu_sets[AssumptionMenu.RA_MON] = a3
    a2 = identified_set_a2(sample, grid_points, outcome_range, bins, tol)
    menu_sets[AssumptionMenu.RA_ER] = a2.summary
    if a2.is_empty:
        diagnostics["branch"] = "A3"
        return RobustBound(
            entries=dict(a3.entries),
            active_menus=(AssumptionMenu.RA_MON,),
            disconnected=frozenset(),
            diagnostics=diagnostics,
            menu_sets=menu_sets,
            a2_detail=a2,
        )

    diagnostics["branch"] = "A2|A3"
    entries: dict[str, Entry] = {}
    gaps: set[str] = set()
    for name in a3.entries:
        e2, e3 = a2.summary[name], a3[name]
        entries[name] = e2.hull(e3)
        if e2.gap_to(e3) > 0.0:
            gaps.add(name)
    return RobustBound(
        entries=entries,
        active_menus=(AssumptionMenu.RA_ER, AssumptionMenu.RA_MON),
        disconnected=frozenset(gaps),
        diagnostics=diagnostics,
        menu_sets=menu_sets,
        a2_detail=a2,
    )
