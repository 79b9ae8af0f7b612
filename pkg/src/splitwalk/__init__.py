"""Rare-event probability estimation by increasing random walks.

The estimators stay unbiased when the score distribution has atoms, the
regime where classical multilevel splitting breaks, by modeling the walk's
count law exactly: a Poisson part for the continuous component plus one
Geometric (non-strict walks) or Bernoulli (strict walks) term per atom.
"""

from .distributions import (
    CountLawSpec,
    DistSpec,
    Strictness,
    batch_law,
    count_law_moments,
    count_law_pmf,
    count_law_pmf_vector,
    draw,
)
from .errors import (
    BudgetError,
    ConfigError,
    DegenerateLawError,
    DimacsParseError,
    EmptyDomainError,
    NonTerminatingTrajectoryError,
    RunawayWalkError,
    SplitwalkError,
    StarvationError,
)
from .estimators import (
    CdfEstimate,
    EstimateReport,
    EstimatorKind,
    RunLengthEncoding,
    crude_monte_carlo,
    cv2_upper_bound,
    empirical_cdf,
    estimate_nonstrict,
    estimate_pure_poisson,
    estimate_strict,
    mvue_bernoulli,
    mvue_geometric,
    rle,
    strict_variance_factor,
    variance_bounds_nonstrict,
    variance_continuous,
    variance_strict,
)
from .experiment import (
    ExperimentConfig,
    run_experiment,
    run_histogram,
    run_reference,
)
from .oracles import (
    GofResult,
    brute_force_count,
    chisq_gof,
    negbin_expectation,
    poisson_expectation,
)
from .rng import RngStream, derive_seed
from .walks import (
    ConditionalSampler,
    WalkMode,
    WalkRecord,
    derive_strict_counts,
    merge_states,
    run_batch,
    run_walk,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CdfEstimate",
    "ConditionalSampler",
    "ConfigError",
    "CountLawSpec",
    "DegenerateLawError",
    "DimacsParseError",
    "DistSpec",
    "EmptyDomainError",
    "EstimateReport",
    "EstimatorKind",
    "ExperimentConfig",
    "GofResult",
    "NonTerminatingTrajectoryError",
    "RngStream",
    "RunLengthEncoding",
    "RunawayWalkError",
    "SplitwalkError",
    "StarvationError",
    "Strictness",
    "WalkMode",
    "WalkRecord",
    "batch_law",
    "brute_force_count",
    "chisq_gof",
    "count_law_moments",
    "count_law_pmf",
    "count_law_pmf_vector",
    "crude_monte_carlo",
    "cv2_upper_bound",
    "derive_seed",
    "derive_strict_counts",
    "draw",
    "empirical_cdf",
    "estimate_nonstrict",
    "estimate_pure_poisson",
    "estimate_strict",
    "merge_states",
    "mvue_bernoulli",
    "mvue_geometric",
    "negbin_expectation",
    "poisson_expectation",
    "rle",
    "run_batch",
    "run_experiment",
    "run_histogram",
    "run_reference",
    "run_walk",
    "strict_variance_factor",
    "variance_bounds_nonstrict",
    "variance_continuous",
    "variance_strict",
]
