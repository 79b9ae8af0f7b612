"""Shared fixtures: the canonical mixed target and small SAT instances."""

from __future__ import annotations

import numpy as np
import pytest

from splitwalk.targets import MixedDistribution
from splitwalk.targets.sat import SatProblem


@pytest.fixture(scope="session")
def canonical_mixture() -> MixedDistribution:
    """U(0,1) base with weight 0.7 and one atom of mass 0.3 at 0.5.

    At level 0.9: p = 0.07, Delta_{0.5} = 7/13, p_pois = 0.13.
    """
    return MixedDistribution.uniform_base(0.0, 1.0, 0.7, [(0.5, 0.3)])


@pytest.fixture(scope="session")
def pure_uniform() -> MixedDistribution:
    """Atom-free U(0,1): the continuous baseline."""
    return MixedDistribution.uniform_base(0.0, 1.0, 1.0, [])


def random_3sat(gen: np.random.Generator, n: int = 12, m: int = 40) -> SatProblem:
    """One uniform random 3-SAT instance."""
    clauses = []
    for _ in range(m):
        variables = gen.choice(n, size=3, replace=False) + 1
        signs = gen.integers(0, 2, 3) * 2 - 1
        clauses.append(tuple(int(v * s) for v, s in zip(variables, signs)))
    return SatProblem(n=n, m=m, clauses=tuple(clauses))


@pytest.fixture(scope="session")
def tiny_sat() -> SatProblem:
    """(u1 or not u2) and (u2 or u3): small enough to enumerate by hand."""
    return SatProblem(n=3, m=2, clauses=((1, -2), (2, 3)))
