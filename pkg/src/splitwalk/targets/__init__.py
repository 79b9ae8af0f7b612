"""Target score models: analytic mixture, 2-D diffusion, SAT counting."""

from .mixed import MixedDistribution, mixed_sample_conditional, mixed_truth
from .diffusion import (
    DiffusionConfig,
    DiffusionSampler,
    diffusion_conditional,
    diffusion_score,
    diffusion_scores,
)
from .sat import (
    Assignment,
    SatPopulation,
    SatProblem,
    SatSampler,
    count_satisfied,
    parse_dimacs,
    sat_conditional,
    serialize_dimacs,
)

__all__ = [
    "MixedDistribution",
    "mixed_sample_conditional",
    "mixed_truth",
    "DiffusionConfig",
    "DiffusionSampler",
    "diffusion_conditional",
    "diffusion_score",
    "diffusion_scores",
    "Assignment",
    "SatPopulation",
    "SatProblem",
    "SatSampler",
    "count_satisfied",
    "parse_dimacs",
    "sat_conditional",
    "serialize_dimacs",
]
