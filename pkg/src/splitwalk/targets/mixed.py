"""Analytic mixed continuous/discrete score distributions.

A mixture of one continuous base law (restricted to bases with closed-form
inverse CDFs, so conditional sampling is PERFECT) and finitely many atoms.
Ground truth (the exceedance probability, each atom's ratio
Delta_d = P(X > d)/P(X >= d), and the continuous-equivalent probability
p_pois = p_x / prod Delta_d) is available in closed form, which makes this
the clean testbed for everything downstream: estimator bias, count laws,
and variance formulas are all checked against these exact values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..distributions import Strictness
from ..errors import EmptyDomainError
from ..rng import RngStream

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class _Base:
    """Continuous base law with closed-form CDF and inverse CDF."""

    kind: str  # "uniform" or "exponential"
    p1: float = 0.0  # uniform: lower; exponential: rate
    p2: float = 1.0  # uniform: upper

    def __post_init__(self) -> None:
        if self.kind == "uniform":
            if not (self.p1 < self.p2):
                raise ValueError(f"uniform base needs a < b, got {self.p1}, {self.p2}")
        elif self.kind == "exponential":
            if not (self.p1 > 0):
                raise ValueError(f"exponential base needs rate > 0, got {self.p1}")
        else:
            raise ValueError(f"unsupported base kind: {self.kind!r}")

    def cdf(self, x: float) -> float:
        if self.kind == "uniform":
            if x <= self.p1:
                return 0.0
            if x >= self.p2:
                return 1.0
            return (x - self.p1) / (self.p2 - self.p1)
        if x <= 0.0:
            return 0.0
        return -math.expm1(-self.p1 * x)

    def quantile_above(self, bound: float, u: float) -> float:
        """Inverse CDF of the base conditioned on exceeding bound, at u."""
        if self.kind == "uniform":
            lo = max(bound, self.p1)
            return lo + u * (self.p2 - lo)
        lo = max(bound, 0.0)
        # memoryless restart above lo
        return lo - math.log1p(-u) / self.p1


@dataclass(frozen=True)
class MixedDistribution:
    """Continuous base with weight w plus atoms (location, mass).

    Masses and w sum to 1; atom locations are distinct.
    """

    base: _Base
    continuous_weight: float
    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        w = self.continuous_weight
        if not (0.0 <= w <= 1.0):
            raise ValueError(f"continuous weight must lie in [0,1], got {w}")
        object.__setattr__(
            self, "atoms", tuple(sorted((float(d), float(m)) for d, m in self.atoms))
        )
        locs = [d for d, _ in self.atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be distinct")
        for d, m in self.atoms:
            if not (m > 0.0):
                raise ValueError(f"atom mass must be positive, got {m} at {d}")
        total = w + sum(m for _, m in self.atoms)
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"weights must sum to 1, got {total}")

    @classmethod
    def uniform_base(
        cls, a: float, b: float, weight: float, atoms=()
    ) -> "MixedDistribution":
        return cls(_Base("uniform", a, b), weight, tuple(atoms))

    @classmethod
    def exponential_base(
        cls, rate: float, weight: float, atoms=()
    ) -> "MixedDistribution":
        return cls(_Base("exponential", rate), weight, tuple(atoms))

    @classmethod
    def from_dict(cls, d: dict) -> "MixedDistribution":
        base = d.get("base", {"kind": "uniform", "a": 0.0, "b": 1.0})
        atoms = tuple((float(a[0]), float(a[1])) for a in d.get("atoms", ()))
        weight = float(d.get("weight", 1.0))
        if base["kind"] == "uniform":
            return cls.uniform_base(float(base["a"]), float(base["b"]), weight, atoms)
        if base["kind"] == "exponential":
            return cls.exponential_base(float(base["rate"]), weight, atoms)
        raise ValueError(f"unsupported base kind: {base['kind']!r}")

    def cdf(self, x: float) -> float:
        """Right-continuous CDF: P(X <= x)."""
        f = self.continuous_weight * self.base.cdf(x)
        for d, m in self.atoms:
            if d <= x:
                f += m
        return f

    def survival(self, x: float) -> float:
        """P(X > x)."""
        s = self.continuous_weight * (1.0 - self.base.cdf(x))
        for d, m in self.atoms:
            if d > x:
                s += m
        return s

    # conditional-sampler protocol
    requires_lockstep = False

    def sample_initial(self, rng: RngStream) -> float:
        return mixed_sample_conditional(self, -math.inf, Strictness.NONSTRICT, rng)

    def sample_above(
        self, bound: float, strictness: Strictness, rng: RngStream
    ) -> float:
        return mixed_sample_conditional(self, bound, strictness, rng)


def mixed_truth(dist: MixedDistribution, x: float):
    """Exact (p_x, [(d, Delta_d) for atoms d <= x], p_pois) at level x."""
    p_x = dist.survival(x)
    atoms_leq = []
    log_prod = 0.0
    for d, m in dist.atoms:
        if d <= x:
            above = dist.survival(d)
            delta = above / (above + m)
            atoms_leq.append((d, delta))
            log_prod += math.log(delta)
    p_pois = p_x * math.exp(-log_prod)
    return p_x, atoms_leq, min(p_pois, 1.0)


def mixed_sample_conditional(
    dist: MixedDistribution, bound: float, strictness: Strictness, rng: RngStream
) -> float:
    """One exact draw from the mixture conditioned above the bound.

    Single-uniform composition-inversion: the uniform first selects the
    continuous slot or an atom slot proportionally to conditional mass,
    then is reused (rescaled) as the quantile level inside the continuous
    slot.  Exact up to float rounding.
    """
    w_cont = dist.continuous_weight * (1.0 - dist.base.cdf(bound))
    slots = [w_cont]
    for d, m in dist.atoms:
        if d > bound or (d == bound and strictness is Strictness.NONSTRICT):
            slots.append(m)
        else:
            slots.append(0.0)
    total = sum(slots)
    if total <= 0.0:
        raise EmptyDomainError(
            f"no mass {'>' if strictness is Strictness.STRICT else '>='} {bound}"
        )
    t = rng.uniform() * total
    if t < w_cont:
        return dist.base.quantile_above(bound, t / w_cont)
    t -= w_cont
    for (d, _), slot in zip(dist.atoms, slots[1:]):
        if t < slot:
            return d
        t -= slot
    # float-edge fallback: return the largest admissible atom
    for (d, _), slot in zip(reversed(dist.atoms), reversed(slots[1:])):
        if slot > 0.0:
            return d
    return dist.base.quantile_above(bound, 1.0 - 1e-16)
