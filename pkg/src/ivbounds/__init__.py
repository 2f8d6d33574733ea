"""Identified sets and misspecification-robust bounds for noncompliance designs.

The package computes what the data reveal about type-specific causal
parameters in a randomized experiment with imperfect compliance, under
three menus of assumptions: the full menu (random assignment + exclusion +
monotonicity), exclusion without monotonicity, and monotonicity without
exclusion.  When the data refute a menu its identified set is empty; the
robust bound unions the surviving menus, so it is never empty.
"""

from .bounds_a1 import identified_set_a1, type_probabilities_a1
from .bounds_a2 import (
    A2Result,
    A2Slice,
    BinaryBounds,
    CdfBounds,
    DefierShareBound,
    MeanBounds,
    MixtureConstruction,
    binary_bounds,
    cdf_bounds_at,
    defier_share_bounds,
    identified_set_a2,
    late_bounds_at,
    mean_bounds_at,
    mixture_construction,
)
from .bounds_a3 import (
    A3Report,
    IttIdentity,
    direct_effect_bounds,
    identified_set_a3,
    itt_decomposition,
    potential_cdf_bounds,
    potential_mean_bounds,
)
from .data import CellStats, Observation, Sample, cell_stats, load_csv, subdistribution
from .empirics import (
    BinnedDensity,
    SteppedCdf,
    binned_density,
    cdf_envelope,
    conditional_quantile,
    default_bin_edges,
    mean_of_cdf,
    trimmed_mean,
)
from .inference import (
    BoundEstimate,
    TrimmingEstimates,
    Variances,
    asymptotic_variances,
    bound_estimates,
    imbens_manski_ci,
    trimming_estimators,
)
from .robust import RobustBound, robust_bound
from .sets import (
    PARAM_NAMES,
    AssumptionMenu,
    Entry,
    IdentifiedSet,
    Interval,
    TypeProbabilities,
)
from .simulate import (
    DgpConfig,
    Latents,
    McTruth,
    SimulatedRecord,
    SimulationResult,
    analytic_truth,
    mc_truth,
    simulate,
)
from .validity import (
    ErCheck,
    LateSlacks,
    exclusion_check,
    late_inequality_slack,
    overlap_statistic,
)

__version__ = "0.1.0"

__all__ = [
    "A2Result", "A2Slice", "A3Report", "AssumptionMenu", "BinaryBounds",
    "BinnedDensity", "BoundEstimate", "CdfBounds", "CellStats", "DefierShareBound",
    "DgpConfig", "Entry", "ErCheck", "IdentifiedSet", "Interval", "IttIdentity",
    "Latents", "LateSlacks", "McTruth", "MeanBounds", "MixtureConstruction",
    "Observation", "PARAM_NAMES", "RobustBound", "Sample", "SimulatedRecord",
    "SimulationResult", "SteppedCdf", "TrimmingEstimates", "TypeProbabilities",
    "Variances", "analytic_truth", "asymptotic_variances", "binary_bounds",
    "binned_density", "bound_estimates", "cdf_bounds_at", "cdf_envelope",
    "cell_stats", "conditional_quantile", "default_bin_edges", "defier_share_bounds",
    "direct_effect_bounds", "exclusion_check", "identified_set_a1",
    "identified_set_a2", "identified_set_a3", "imbens_manski_ci",
    "itt_decomposition", "late_bounds_at", "late_inequality_slack", "load_csv",
    "mc_truth", "mean_bounds_at", "mean_of_cdf", "mixture_construction",
    "overlap_statistic", "potential_cdf_bounds", "potential_mean_bounds",
    "robust_bound", "simulate", "subdistribution", "trimmed_mean",
    "trimming_estimators", "type_probabilities_a1",
]
