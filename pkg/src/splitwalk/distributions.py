"""Elementary sampling laws and the compound counting laws of increasing walks.

The count of states a walk records below a level x is, for a continuous
score law, Poisson with rate -log p_x.  Each atom d of the score law that
the walk can visit adds an independent term governed by the ratio
Delta_d = P(X > d) / P(X >= d):

  non-strict walks: a Geometric(Delta_d) number of failures before success
                    (the walk may revisit the atom),
  strict walks:     a Bernoulli(1 - Delta_d) indicator (visit it or not),

and the Poisson rate becomes lambda = -log(p_x / prod_d Delta_d).  This
module computes exact PMFs and moments of those compound laws, and samples
the elementary laws reproducibly.

Poisson sampling uses the stream's generator directly: numpy implements
inversion for small rates and a rejection method for rates >= 10, both
seed-deterministic, which is the split this package needs.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats

from .rng import RngStream

# Total-variation budget for truncated convolutions.
_TV_BUDGET = 1e-12


class Strictness(enum.Enum):
    """Inequality used when conditioning on exceeding the current state."""

    STRICT = "strict"       # next state distributed given X > current
    NONSTRICT = "nonstrict" # next state distributed given X >= current


@dataclass(frozen=True)
class DistSpec:
    """One of the elementary laws: Uniform01, Bernoulli, Geometric, Poisson.

    Geometric counts failures before the first success (support starts at 0).
    """

    kind: str
    param: float = 0.0

    _KINDS = ("Uniform01", "Bernoulli", "Geometric", "Poisson")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown distribution kind: {self.kind!r}")
        p = self.param
        if self.kind == "Bernoulli" and not (0.0 <= p <= 1.0):
            raise ValueError(f"Bernoulli p must lie in [0,1], got {p}")
        if self.kind == "Geometric" and not (0.0 < p <= 1.0):
            raise ValueError(f"Geometric p must lie in (0,1], got {p}")
        if self.kind == "Poisson" and not (p >= 0.0):
            raise ValueError(f"Poisson rate must be >= 0, got {p}")

    @classmethod
    def uniform01(cls) -> "DistSpec":
        return cls("Uniform01")

    @classmethod
    def bernoulli(cls, p: float) -> "DistSpec":
        return cls("Bernoulli", p)

    @classmethod
    def geometric(cls, p: float) -> "DistSpec":
        return cls("Geometric", p)

    @classmethod
    def poisson(cls, lam: float) -> "DistSpec":
        return cls("Poisson", lam)

    def mean_variance(self) -> tuple[float, float]:
        p = self.param
        if self.kind == "Uniform01":
            return 0.5, 1.0 / 12.0
        if self.kind == "Bernoulli":
            return p, p * (1.0 - p)
        if self.kind == "Geometric":
            q = 1.0 - p
            return q / p, q / (p * p)
        return p, p  # Poisson


def draw(spec: DistSpec, rng: RngStream):
    """One variate of the named law from the given stream."""
    gen = rng.generator
    if spec.kind == "Uniform01":
        return float(gen.random())
    if spec.kind == "Bernoulli":
        return int(gen.random() < spec.param)
    if spec.kind == "Geometric":
        # numpy's geometric counts trials including the success
        return int(gen.geometric(spec.param)) - 1
    return int(gen.poisson(spec.param))


@dataclass(frozen=True)
class CountLawSpec:
    """Parameters of the compound counting law of one walk (or a batch).

    poisson_rate: lambda = -log(p_x / prod_d Delta_d), >= 0.
    atoms:        ratios Delta_d in (0,1], one per atom below the level
                  (repeats allowed; a batch of n walks repeats each n times).
    kind:         Strictness.NONSTRICT (Geometric terms) or
                  Strictness.STRICT (Bernoulli terms).
    """

    poisson_rate: float
    atoms: tuple[float, ...]
    kind: Strictness

    def __post_init__(self) -> None:
        if not (self.poisson_rate >= 0.0):
            raise ValueError(f"poisson_rate must be >= 0, got {self.poisson_rate}")
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))
        for d in self.atoms:
            if not (0.0 < d <= 1.0):
                raise ValueError(f"atom ratio must lie in (0,1], got {d}")
        if not isinstance(self.kind, Strictness):
            raise ValueError(f"kind must be a Strictness, got {self.kind!r}")

    @classmethod
    def for_level(
        cls, p_x: float, deltas: tuple[float, ...] | list[float], kind: Strictness
    ) -> "CountLawSpec":
        """Law of the count below a level with P(X >= x) = p_x and given atoms."""
        if not (0.0 < p_x <= 1.0):
            raise ValueError(f"p_x must lie in (0,1], got {p_x}")
        deltas = tuple(float(d) for d in deltas)
        log_prod = sum(math.log(d) for d in deltas)
        lam = -(math.log(p_x) - log_prod)
        if lam < 0.0:
            if lam < -1e-9:
                raise ValueError(
                    f"p_x={p_x} exceeds the product of atom ratios; no valid rate"
                )
            lam = 0.0
        return cls(lam, deltas, kind)


def batch_law(law: CountLawSpec, n: int) -> CountLawSpec:
    """Law of the summed count of n independent walks with the same law."""
    if n < 1:
        raise ValueError(f"batch size must be >= 1, got {n}")
    return CountLawSpec(law.poisson_rate * n, law.atoms * n, law.kind)


def _component_pmfs(law: CountLawSpec) -> list[np.ndarray]:
    """PMF vectors of each independent component, truncated so the total
    discarded tail mass stays below the TV budget.

    Repeated atoms group: k non-strict atoms with equal Delta convolve to
    NegativeBinomial(k, Delta) counting failures; k strict atoms to
    Binomial(k, 1-Delta).  Exact inverse-survival truncation per component.
    """
    groups = Counter(law.atoms)
    ncomp = 1 + len(groups)
    tail = _TV_BUDGET / (10 * ncomp)

    comps: list[np.ndarray] = []
    lam = law.poisson_rate
    if lam == 0.0:
        comps.append(np.array([1.0]))
    else:
        hi = int(stats.poisson.isf(tail, lam)) + 1
        comps.append(stats.poisson.pmf(np.arange(hi + 1), lam))

    for delta, mult in sorted(groups.items()):
        if delta == 1.0:
            continue  # surely-exceeded atom contributes nothing
        if law.kind is Strictness.NONSTRICT:
            dist = stats.nbinom(mult, delta)
        else:
            dist = stats.binom(mult, 1.0 - delta)
        hi = int(dist.isf(tail)) + 1
        comps.append(dist.pmf(np.arange(hi + 1)))
    return comps


@lru_cache(maxsize=64)
def _pmf_vector(law: CountLawSpec) -> np.ndarray:
    comps = _component_pmfs(law)
    out = comps[0]
    for c in comps[1:]:
        out = np.convolve(out, c)
    return out


def count_law_pmf(law: CountLawSpec, k: int) -> float:
    """Exact P(count = k), truncation error < 1e-12 in total variation."""
    if k < 0:
        raise ValueError(f"count must be >= 0, got {k}")
    vec = _pmf_vector(law)
    if k >= len(vec):
        return 0.0
    return float(vec[k])


def count_law_pmf_vector(law: CountLawSpec, upto: int) -> np.ndarray:
    """PMF on 0..upto as an array (same truncation guarantee)."""
    if upto < 0:
        raise ValueError(f"upto must be >= 0, got {upto}")
    vec = _pmf_vector(law)
    out = np.zeros(upto + 1)
    n = min(len(vec), upto + 1)
    out[:n] = vec[:n]
    return out


def count_law_moments(law: CountLawSpec) -> tuple[float, float]:
    """Closed-form (mean, variance) of the compound counting law."""
    mean = law.poisson_rate
    var = law.poisson_rate
    for d in law.atoms:
        if law.kind is Strictness.NONSTRICT:
            mean += 1.0 / d - 1.0
            var += (1.0 / d) * (1.0 / d - 1.0)
        else:
            mean += 1.0 - d
            var += d * (1.0 - d)
    return mean, var
