"""Estimation and inference for the no-exclusion bounds.

The three estimable bound pairs are the always-taker direct effect, the
never-taker direct effect, and the total complier effect.  Each bound is a
trimmed-mean contrast; its sampling variance has three plug-in pieces: the
variance of the trimmed tail, a quantile-gap term, and the estimated
trimming share's own sampling noise.  Confidence intervals cover the
*parameter* rather than the whole identified interval, using a critical
value that interpolates between the one-sided and two-sided normal
quantiles as the estimated bound width grows relative to its noise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .data import Sample, cell_stats
from .empirics import conditional_quantile
from .errors import (
    BadLevelError,
    EmptyCellError,
    EmptyTrimmedCellError,
    NegativeSeError,
    NonPositiveFirstStageError,
)
from .sets import Interval
from .validity import TAU_FS

__all__ = [
    "BoundEstimate",
    "TrimmingEstimates",
    "Variances",
    "asymptotic_variances",
    "bound_estimates",
    "imbens_manski_ci",
    "trimming_estimators",
]

_BOUND_KEYS = ("delta_1a", "delta_0n", "total_c")


@dataclass(frozen=True)
class TrimmingEstimates:
    """Estimated lower/upper bounds for the three effect parameters."""

    delta_1a: Interval
    delta_0n: Interval
    total_c: Interval
    alpha: float
    gamma: float

    def __getitem__(self, key: str) -> Interval:
        if key not in _BOUND_KEYS:
            raise KeyError(key)
        return getattr(self, key)


@dataclass(frozen=True)
class Variances:
    """Plug-in variance components and the implied standard errors.

    ``se[key]`` holds ``(se_lb, se_ub)`` for each bound; the components
    keep their conventional names so they can be checked term by term.
    """

    v_lb1: float
    v_ub1: float
    v_c1: float
    v_alpha1: float
    v_lb2: float
    v_ub2: float
    v_c2: float
    v_gamma1: float
    v_lb3: float
    v_ub3: float
    v_lb4: float
    v_ub4: float
    v_alpha2: float
    v_gamma2: float
    se: dict[str, tuple[float, float]]


@dataclass(frozen=True)
class BoundEstimate:
    """One estimated bound pair with its confidence interval."""

    lb: float
    ub: float
    se_lb: float
    se_ub: float
    n: int
    ci: Interval
    c_bar: float


def _require_cells(sample: Sample) -> None:
    sample.require_both_arms()
    st = cell_stats(sample)
    if st.first_stage <= TAU_FS:
        raise NonPositiveFirstStageError(
            f"first stage {st.first_stage:.3g} is not positive"
        )
    for d, z in ((1, 1), (1, 0), (0, 0), (0, 1)):
        if st.count[d, z] == 0:
            raise EmptyCellError(f"cell (D={d}, Z={z}) is empty")


def _frac_tail_mean(vals: np.ndarray, cutoff: float, target: float, tail: str) -> float:
    """Tail mean with fractional weight at the cutoff so the mass is exact.

    ``target`` is the tail size in observation units.  Independent of the
    cached trimmed-mean machinery on purpose: this is the direct
    indicator-sum form of the estimators, adjusted at the boundary.
    """
    if tail == "lower":
        mask = vals <= cutoff
        excess = mask.sum() - target
        s = vals[mask].sum() - excess * cutoff
    else:
        mask = vals > cutoff
        s = vals[mask].sum() + (target - mask.sum()) * cutoff
    return float(s / target)


def trimming_estimators(sample: Sample) -> TrimmingEstimates:
    """Sample-analog bound estimators for the three effect parameters.

    Trimming shares: ``alpha = E[D|Z=0] / E[D|Z=1]`` of the treated
    instrument-on cell is always-takers, ``gamma = E[1-D|Z=1] /
    E[1-D|Z=0]`` of the untreated instrument-off cell is never-takers.
    Quantiles follow ``min{y: ecdf >= q}``; the observation at the cutoff
    gets a fractional weight so each trimmed mass is exact, making these
    estimators agree with the identified-set endpoints to float precision
    on tie-free data.
    """
    _require_cells(sample)
    st = cell_stats(sample)
    alpha = float(st.prob[1, 0] / st.prob[1, 1])
    gamma = float(st.prob[0, 1] / st.prob[0, 0])

    y11 = sample.cell_values(1, 1)
    y00 = sample.cell_values(0, 0)
    mean_10 = float(st.cond_mean[1, 0])
    mean_01 = float(st.cond_mean[0, 1])

    q11 = {q: conditional_quantile(sample, 1, 1, q) for q in (alpha, 1 - alpha) if 0 < q <= 1}
    q00 = {q: conditional_quantile(sample, 0, 0, q) for q in (gamma, 1 - gamma) if 0 < q <= 1}

    n11, n00 = y11.size, y00.size
    lb1 = _frac_tail_mean(y11, q11[alpha], alpha * n11, "lower") - mean_10
    ub1 = _frac_tail_mean(y11, q11[1 - alpha], alpha * n11, "upper") - mean_10
    lb2 = mean_01 - _frac_tail_mean(y00, q00[1 - gamma], gamma * n00, "upper")
    ub2 = mean_01 - _frac_tail_mean(y00, q00[gamma], gamma * n00, "lower")
    lb3 = _frac_tail_mean(y11, q11[1 - alpha], (1 - alpha) * n11, "lower") - _frac_tail_mean(
        y00, q00[gamma], (1 - gamma) * n00, "upper"
    )
    ub3 = _frac_tail_mean(y11, q11[alpha], (1 - alpha) * n11, "upper") - _frac_tail_mean(
        y00, q00[1 - gamma], (1 - gamma) * n00, "lower"
    )
    return TrimmingEstimates(
        delta_1a=Interval(lb1, ub1),
        delta_0n=Interval(lb2, ub2),
        total_c=Interval(lb3, ub3),
        alpha=alpha,
        gamma=gamma,
    )


def _tail_terms(vals: np.ndarray, q: float, tail: str, denom: float, share: float,
                v_share: float) -> float:
    """One bound's variance: tail variance + quantile gap + share noise."""
    sub = vals[vals <= q] if tail == "lower" else vals[vals > q]
    if tail == "upper" and sub.size == 0:
        sub = vals[vals == q]  # tail mass sits entirely on the tied cutoff atom
    if sub.size < 2:
        raise EmptyTrimmedCellError("trimmed sub-cell has fewer than 2 observations")
    gap = q - float(sub.mean())
    v = float(np.var(sub)) / (denom * share)
    v += gap * gap * (1.0 - share) / (denom * share)
    v += (gap / share) ** 2 * v_share
    return v


def asymptotic_variances(sample: Sample) -> Variances:
    """Plug-in variance components for the three bound pairs.

    Every population quantity in the component formulas is replaced by its
    sample analog; trimmed sub-cell variances use the population
    normalization to match the root-n scaling.
    """
    _require_cells(sample)
    st = cell_stats(sample)
    est = trimming_estimators(sample)
    alpha, gamma = est.alpha, est.gamma
    n = sample.n

    p_a = float(st.prob[1, 0])
    p_n = float(st.prob[0, 1])
    mean_z = float(np.mean(sample.z))
    e_dz = float(st.count[1, 1]) / n          # E[D Z]
    e_d1mz = float(st.count[1, 0]) / n        # E[D (1-Z)]
    e_1md_1mz = float(st.count[0, 0]) / n     # E[(1-D)(1-Z)]
    e_1md_z = float(st.count[0, 1]) / n       # E[(1-D) Z]

    y11 = sample.cell_values(1, 1)
    y00 = sample.cell_values(0, 0)
    q_a = conditional_quantile(sample, 1, 1, alpha)
    q_1ma = conditional_quantile(sample, 1, 1, 1 - alpha)
    q_g = conditional_quantile(sample, 0, 0, gamma)
    q_1mg = conditional_quantile(sample, 0, 0, 1 - gamma)

    v_alpha1 = alpha**2 * (
        (1 - p_a / alpha) / (mean_z * p_a / alpha) + (1 - p_a) / ((1 - mean_z) * p_a)
    )
    v_alpha2 = (1 - alpha) ** 2 * (
        (1 - p_a / (1 - alpha)) / (mean_z * p_a / (1 - alpha))
        + (1 - p_a) / ((1 - mean_z) * p_a)
    )
    v_gamma1 = gamma**2 * (
        (1 - p_n / gamma) / ((1 - mean_z) * p_n / gamma) + (1 - p_n) / (mean_z * p_n)
    )
    v_gamma2 = (1 - gamma) ** 2 * (
        (1 - p_n / (1 - gamma)) / ((1 - mean_z) * p_n / (1 - gamma))
        + (1 - p_n) / (mean_z * p_n)
    )

    v_lb1 = _tail_terms(y11, q_a, "lower", e_dz, alpha, v_alpha1)
    v_ub1 = _tail_terms(y11, q_1ma, "upper", e_dz, alpha, v_alpha1)
    v_c1 = float(np.var(sample.cell_values(1, 0))) / e_d1mz

    v_lb2 = _tail_terms(y00, q_1mg, "upper", e_1md_1mz, gamma, v_gamma1)
    v_ub2 = _tail_terms(y00, q_g, "lower", e_1md_1mz, gamma, v_gamma1)
    v_c2 = float(np.var(sample.cell_values(0, 1))) / e_1md_z

    v_lb3 = _tail_terms(y11, q_1ma, "lower", e_dz, 1 - alpha, v_alpha2)
    v_ub3 = _tail_terms(y11, q_a, "upper", e_dz, 1 - alpha, v_alpha2)
    v_lb4 = _tail_terms(y00, q_g, "upper", e_1md_1mz, 1 - gamma, v_gamma2)
    v_ub4 = _tail_terms(y00, q_1mg, "lower", e_1md_1mz, 1 - gamma, v_gamma2)

    se = {
        "delta_1a": (np.sqrt((v_lb1 + v_c1) / n), np.sqrt((v_ub1 + v_c1) / n)),
        "delta_0n": (np.sqrt((v_lb2 + v_c2) / n), np.sqrt((v_ub2 + v_c2) / n)),
        "total_c": (np.sqrt((v_lb3 + v_lb4) / n), np.sqrt((v_ub3 + v_ub4) / n)),
    }
    return Variances(
        v_lb1=v_lb1, v_ub1=v_ub1, v_c1=v_c1, v_alpha1=v_alpha1,
        v_lb2=v_lb2, v_ub2=v_ub2, v_c2=v_c2, v_gamma1=v_gamma1,
        v_lb3=v_lb3, v_ub3=v_ub3, v_lb4=v_lb4, v_ub4=v_ub4,
        v_alpha2=v_alpha2, v_gamma2=v_gamma2,
        se={k: (float(a), float(b)) for k, (a, b) in se.items()},
    )


def imbens_manski_ci(
    lb: float,
    ub: float,
    se_lb: float,
    se_ub: float,
    n: int,
    level: float = 0.95,
) -> tuple[Interval, float]:
    """Confidence interval for a partially identified parameter.

    Solves ``Phi(c + sqrt(n) (ub - lb) / max(se)) - Phi(-c) = level`` for
    the critical value ``c`` by bisection on its provable bracket
    ``[Phi^{-1}(level), Phi^{-1}((1+level)/2)]`` to 1e-10, then widens the
    bound estimate by ``c`` standard errors on each side.  With zero
    standard errors the one-sided quantile is reported and the interval is
    the bound itself.
    """
    if not 0.0 < level < 1.0:
        raise BadLevelError(f"level = {level} outside (0, 1)")
    if se_lb < 0 or se_ub < 0:
        raise NegativeSeError(f"negative standard error: ({se_lb}, {se_ub})")
    if lb > ub:
        raise ValueError(f"bound estimates out of order: [{lb}, {ub}]")
    one_sided = float(ndtri(level))
    two_sided = float(ndtri((1.0 + level) / 2.0))
    max_se = max(se_lb, se_ub)
    if max_se == 0.0:
        return Interval(lb, ub), one_sided

    shift = np.sqrt(n) * (ub - lb) / max_se

    def f(c: float) -> float:
        return float(ndtr(c + shift) - ndtr(-c)) - level

    lo, hi = one_sided, two_sided
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    c = 0.5 * (lo + hi)
    root_n = np.sqrt(n)
    return Interval(lb - c * se_lb / root_n, ub + c * se_ub / root_n), c


def bound_estimates(sample: Sample, level: float = 0.95) -> dict[str, BoundEstimate]:
    """Bound estimates with confidence intervals for all three parameters.

    ``se_lb``/``se_ub`` in the result are finished standard errors of the
    endpoint estimates; the critical-value solver consumes the unscaled
    asymptotic standard deviations, so the scaling is undone here.
    """
    est = trimming_estimators(sample)
    var = asymptotic_variances(sample)
    root_n = float(np.sqrt(sample.n))
    out: dict[str, BoundEstimate] = {}
    for key in _BOUND_KEYS:
        bound = est[key]
        se_lb, se_ub = var.se[key]
        ci, c_bar = imbens_manski_ci(
            bound.lo, bound.hi, se_lb * root_n, se_ub * root_n, sample.n, level
        )
        out[key] = BoundEstimate(
            lb=bound.lo, ub=bound.hi, se_lb=se_lb, se_ub=se_ub,
            n=sample.n, ci=ci, c_bar=c_bar,
        )
    return out
