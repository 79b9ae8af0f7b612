"""Exception types raised by splitwalk.

Parameter and usage errors (bad shapes, out-of-range arguments, calling an
estimator on data it cannot digest) raise plain ``ValueError``.  The classes
here mark conditions that arise from the stochastic process itself or from
external inputs, so callers can distinguish "you called it wrong" from "the
run hit a wall".
"""

from __future__ import annotations


class SplitwalkError(Exception):
    """Base class for runtime failures of walks, samplers, and pipelines."""


class RunawayWalkError(SplitwalkError):
    """A walk exceeded its draw budget without crossing its level.

    Happens when the target probability is zero (the level is above the
    score's essential sup) or the budget is far too small for -log(p).
    """


class StarvationError(SplitwalkError):
    """A conditional sampler could not produce a qualifying draw.

    Rejection samplers raise this when the acceptance budget is exhausted;
    the population sampler raises it when no archived state qualifies.
    """


class NonTerminatingTrajectoryError(SplitwalkError):
    """A trajectory failed to reach an absorbing set within the step cap."""


class EmptyDomainError(SplitwalkError):
    """A conditional distribution has zero mass above the requested bound."""


class DimacsParseError(SplitwalkError):
    """Malformed DIMACS CNF input.

    Carries the 1-based line number where parsing failed.
    """

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class BudgetError(SplitwalkError):
    """An exact oracle was asked for more work than its hard budget allows."""


class DegenerateLawError(SplitwalkError):
    """A goodness-of-fit test cannot run (fewer than two usable bins)."""


class ConfigError(SplitwalkError):
    """Invalid experiment configuration or config file."""
