"""Reliability estimation for geometric lifetimes."""

from ._core import (
    ParseError,
    __version__,
    conditional_pmf,
    conditional_survival,
    mle_reliability,
    mle_reliability_censored,
    mle_stress_strength,
    mle_system_reliability,
    naive_reliability,
    pmf,
    reliability,
    run_study_spec,
    stress_strength,
    suff_stats,
    system_reliability,
    table,
    ue_reliability,
    ue_reliability_draws,
    ue_stress_strength,
    ue_system_reliability,
    validate_study_spec,
)

__all__ = [
    "ParseError",
    "__version__",
    "conditional_pmf",
    "conditional_survival",
    "mle_reliability",
    "mle_reliability_censored",
    "mle_stress_strength",
    "mle_system_reliability",
    "naive_reliability",
    "pmf",
    "reliability",
    "run_study_spec",
    "stress_strength",
    "suff_stats",
    "system_reliability",
    "table",
    "ue_reliability",
    "ue_reliability_draws",
    "ue_stress_strength",
    "ue_system_reliability",
    "validate_study_spec",
]
