"""Built-in benchmark targets for the ``replicate`` command.

Each target rebuilds a published quantity from scratch and compares it to
the reference value at a stated tolerance.  Simulation targets carry their
own default seed and size; the study-replication target needs the original
extract supplied by the user (it is not redistributed with the package).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds_a1 import identified_set_a1, type_probabilities_a1
from .bounds_a2 import defier_share_bounds, identified_set_a2
from .bounds_a3 import direct_effect_bounds
from .data import Sample, cell_stats
from .inference import bound_estimates
from .robust import robust_bound
from .simulate import DgpConfig, analytic_truth, mc_truth, simulate
from .validity import overlap_statistic

__all__ = ["Check", "TARGETS", "run_target"]

DEFAULT_SEED = 1234

#: Coarse shared binning documented for the correlated-design target; the
#: published bracket corresponds to a smoothed density estimate, which a
#: ~30-bin histogram tracks to the stated tolerance.
CORRELATED_BINS = 30

#: Binning documented for the study extract's overlap statistic.
STUDY_BINS = 40


@dataclass(frozen=True)
class Check:
    """One benchmark comparison."""

    name: str
    observed: float
    expected: float
    tol: float

    @property
    def passed(self) -> bool:
        return abs(self.observed - self.expected) <= self.tol

    def row(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict}  {self.name}: observed {self.observed:.6g}, "
            f"expected {self.expected:.6g} ± {self.tol:g}"
        )


def _flag(name: str, ok: bool) -> Check:
    # boolean conditions reported through the same numeric interface
    return Check(name=name, observed=float(ok), expected=1.0, tol=0.0)


def simulation_moments(seed: int = DEFAULT_SEED, n: int = 10_000_000) -> list[Check]:
    """Ground-truth moments of the independent-latent design."""
    res = simulate(DgpConfig(n=n, seed=seed, rho=0.0))
    tr = mc_truth(res.latents)
    st = cell_stats(res.sample)
    p = tr.probs
    checks = [
        Check("type share p_df", p.p_df, 0.170836, 5e-4),
        Check("type share p_a", p.p_a, 0.079284, 5e-4),
        Check("type share p_c", p.p_c, 0.075601, 5e-4),
        Check("type share p_n", p.p_n, 0.674279, 5e-4),
        Check("complier effect", tr.late_c, 4.925344, 1e-2),
        Check("defier effect", tr.late_df, 1.231659, 1e-2),
        Check("first-stage reversal", float(st.prob[1, 0] - st.prob[1, 1]), 0.0956, 1e-3),
        Check("iv estimand", st.iv_estimand, -1.6874, 5e-2),
    ]
    an = analytic_truth(res.config)
    for label, got, exact in (
        ("analytic p_a", p.p_a, an.p_a),
        ("analytic p_c", p.p_c, an.p_c),
        ("analytic p_df", p.p_df, an.p_df),
        ("analytic p_n", p.p_n, an.p_n),
    ):
        se = np.sqrt(exact * (1 - exact) / n)
        checks.append(Check(label, got, exact, 4 * se))
    return checks


def effect_bands(seed: int = DEFAULT_SEED, n: int = 1_000_000,
                 grid_points: int = 41) -> tuple[list[Check], np.ndarray, np.ndarray]:
    """Sign and coverage of the effect bands over the defier-share grid."""
    res = simulate(DgpConfig(n=n, seed=seed, rho=0.0))
    tr = mc_truth(res.latents)
    a2 = identified_set_a2(res.sample, grid_points=grid_points)
    band_c, band_df = a2.band("theta_0c"), a2.band("theta_0df")
    interior_c = band_c[1:-1] if band_c.shape[0] > 2 else band_c
    interior_df = band_df[1:-1] if band_df.shape[0] > 2 else band_df
    i = int(np.argmin(np.abs(band_c[:, 0] - tr.probs.p_df)))
    checks = [
        _flag("set nonempty", not a2.is_empty),
        _flag("complier lower bounds all positive", bool(np.all(interior_c[:, 1] > 0))),
        _flag("defier lower bounds all positive", bool(np.all(interior_df[:, 1] > 0))),
        _flag(
            "true complier effect inside band at true defier share",
            band_c[i, 1] <= tr.late_c <= band_c[i, 2],
        ),
        _flag(
            "true defier effect inside band at true defier share",
            band_df[i, 1] <= tr.late_df <= band_df[i, 2],
        ),
    ]
    return checks, band_c, band_df


def correlated_design(seed: int = DEFAULT_SEED, n: int = 10_000_000) -> list[Check]:
    """Correlated-latent design: tight defier bracket, overlap rejection."""
    res = simulate(DgpConfig(n=n, seed=seed, rho=0.33))
    s = res.sample
    db = defier_share_bounds(s, bins=CORRELATED_BINS)
    return [
        Check("defier share lower bound", db.lower, 0.165, 5e-3),
        Check("defier share upper bound", db.upper, 0.167, 5e-3),
        Check("true defier share", res.latents.type_shares().p_df, 0.1356, 1e-3),
        _flag("overlap statistic positive (documented binning)", db.overlap_stat > 0),
        _flag("overlap statistic positive (default binning)", overlap_statistic(s) > 0),
        _flag("identified set empty", db.is_empty),
    ]


def study_extract(sample: Sample, level: float = 0.95) -> list[Check]:
    """Returns-to-schooling extract: summary stats, shares, bounds, intervals."""
    st = cell_stats(sample)
    tp = type_probabilities_a1(sample)
    a1 = identified_set_a1(sample)
    a2 = identified_set_a2(sample)
    rb = robust_bound(sample)
    eff = direct_effect_bounds(sample)
    inf = bound_estimates(sample, level=level)
    checks = [
        Check("mean treatment", float(np.mean(sample.d)), 0.271, 1e-3),
        Check("mean instrument", float(np.mean(sample.z)), 0.682, 1e-3),
        Check("mean outcome", float(np.mean(sample.y)), 6.262, 1e-3),
        Check("first stage", st.first_stage, 0.07, 5e-3),
        Check("type share p_a", tp.p_a, 0.2247, 5e-4),
        Check("type share p_c", tp.p_c, 0.0685, 5e-4),
        Check("type share p_n", tp.p_n, 0.7068, 5e-4),
        Check("type share p_df", tp.p_df, 0.0, 5e-4),
        Check("overlap statistic (40 bins)",
              overlap_statistic(sample, bins=STUDY_BINS), 0.036, 1e-2),
        Check("always-taker effect lb", eff.delta_1a_bounds.lo, -0.0831, 5e-3),
        Check("always-taker effect ub", eff.delta_1a_bounds.hi, 0.2639, 5e-3),
        Check("never-taker effect lb", eff.delta_0n_bounds.lo, 0.0813, 5e-3),
        Check("never-taker effect ub", eff.delta_0n_bounds.hi, 0.2308, 5e-3),
        Check("total complier effect lb", eff.total_c_bounds.lo, -0.9655, 5e-3),
        Check("total complier effect ub", eff.total_c_bounds.hi, 1.6753, 5e-3),
        Check("always-taker effect ci lo", inf["delta_1a"].ci.lo, -0.1595, 1e-2),
        Check("always-taker effect ci hi", inf["delta_1a"].ci.hi, 0.3414, 1e-2),
        Check("never-taker effect ci lo", inf["delta_0n"].ci.lo, 0.0415, 1e-2),
        Check("never-taker effect ci hi", inf["delta_0n"].ci.hi, 0.2707, 1e-2),
        Check("total complier effect ci lo", inf["total_c"].ci.lo, -1.0372, 1e-2),
        Check("total complier effect ci hi", inf["total_c"].ci.hi, 1.7490, 1e-2),
        _flag("full menu set empty", a1.is_empty),
        _flag("no-monotonicity set empty", a2.is_empty),
        _flag("active menus == {A3}", [m.code for m in rb.active_menus] == ["A3"]),
    ]
    return checks


TARGETS = ("table1", "figure2", "appendixD", "card")


def run_target(name: str, seed: int = DEFAULT_SEED, n: int | None = None,
               grid_points: int = 41, sample: Sample | None = None) -> list[Check]:
    """Dispatch one replication target by its identifier."""
    if name == "table1":
        return simulation_moments(seed=seed, n=n or 10_000_000)
    if name == "figure2":
        checks, _, _ = effect_bands(seed=seed, n=n or 1_000_000, grid_points=grid_points)
        return checks
    if name == "appendixD":
        return correlated_design(seed=seed, n=n or 10_000_000)
    if name == "card":
        if sample is None:
            raise ValueError("the card target needs a dataset")
        return study_extract(sample)
    raise ValueError(f"unknown target {name!r}; choose from {TARGETS}")
