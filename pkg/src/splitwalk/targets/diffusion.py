"""Overdamped 2-D double-well diffusion scored by its reaction coordinate.

Euler scheme for dU = -grad V(U) dt + sqrt(2/beta) dW with

  V(u1, u2) = -(u1^2/2 - u1^4/4) - b (u2^2/2 - u2^4/4) + (a/2) u1^2 u2^2

absorbed at A = {Phi <= 0} or B = {Phi >= 1}, Phi(u) = 0.5 (1 + u1).
The score is X = sup of Phi over the discrete trajectory, initial and
absorbing states included; no interpolation, so the large default timestep
is load-bearing: trajectories that jump from u0 straight into A all share
the exact score Phi(u0), creating the single atom of this target.

Conditional sampling is perfect rejection: regenerate full trajectories
until the score clears the bound.

Kernels are numba-compiled and consume the walk's numpy Generator directly,
so batches stay bitwise reproducible and threads scale (nogil).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ..distributions import Strictness
from ..errors import NonTerminatingTrajectoryError, StarvationError
from ..rng import RngStream

DEFAULT_REJECTION_CAP = 1_000_000


@dataclass(frozen=True)
class DiffusionConfig:
    a: float = 0.6
    b: float = 0.3
    beta: float = 10.0
    dt: float = 1.0
    u0: tuple[float, float] = (-0.9, 0.0)
    max_steps: int = 1_000_000
    rejection_cap: int = DEFAULT_REJECTION_CAP

    def __post_init__(self) -> None:
        if not (self.beta > 0.0):
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")

    @classmethod
    def from_dict(cls, d: dict) -> "DiffusionConfig":
        kwargs = {}
        for key in ("a", "b", "beta", "dt"):
            if key in d:
                kwargs[key] = float(d[key])
        if "u0" in d:
            kwargs["u0"] = (float(d["u0"][0]), float(d["u0"][1]))
        for key in ("max_steps", "rejection_cap"):
            if key in d:
                kwargs[key] = int(d[key])
        return cls(**kwargs)


def potential(u1: float, u2: float, a: float, b: float) -> float:
    return (
        -(u1 * u1 / 2.0 - u1**4 / 4.0)
        - b * (u2 * u2 / 2.0 - u2**4 / 4.0)
        + 0.5 * a * u1 * u1 * u2 * u2
    )


def gradient(u1: float, u2: float, a: float, b: float) -> tuple[float, float]:
    g1 = -(u1 - u1**3) + a * u1 * u2 * u2
    g2 = -b * (u2 - u2**3) + a * u1 * u1 * u2
    return g1, g2


@njit(cache=True, nogil=True)
def _trajectory_sup(gen, a, b, beta, dt, u1_0, u2_0, max_steps):
    """One trajectory's score; NaN signals the step cap was hit."""
    u1 = u1_0
    u2 = u2_0
    sigma = math.sqrt(2.0 * dt / beta)
    phi = 0.5 * (1.0 + u1)
    sup = phi
    for _ in range(max_steps):
        if phi <= 0.0 or phi >= 1.0:
            return sup
        g1 = -(u1 - u1 * u1 * u1) + a * u1 * u2 * u2
        g2 = -b * (u2 - u2 * u2 * u2) + a * u1 * u1 * u2
        u1 = u1 - g1 * dt + sigma * gen.standard_normal()
        u2 = u2 - g2 * dt + sigma * gen.standard_normal()
        phi = 0.5 * (1.0 + u1)
        if phi > sup:
            sup = phi
    if phi <= 0.0 or phi >= 1.0:
        return sup
    return np.nan


@njit(cache=True, nogil=True)
def _conditional_score(gen, a, b, beta, dt, u1_0, u2_0, max_steps,
                       bound, strict, max_trials):
    """Rejection sampling of the score above a bound.

    NaN propagates a non-terminating trajectory; -inf signals the
    rejection cap was exhausted.  Scores are always >= Phi(u0) > -inf and
    never NaN, so the sentinels are unambiguous.
    """
    for _ in range(max_trials):
        x = _trajectory_sup(gen, a, b, beta, dt, u1_0, u2_0, max_steps)
        if np.isnan(x):
            return np.nan
        if strict:
            if x > bound:
                return x
        elif x >= bound:
            return x
    return -np.inf


@njit(cache=True, nogil=True)
def _crude_scores(gen, a, b, beta, dt, u1_0, u2_0, max_steps, n):
    out = np.empty(n)
    for i in range(n):
        out[i] = _trajectory_sup(gen, a, b, beta, dt, u1_0, u2_0, max_steps)
    return out


def diffusion_score(cfg: DiffusionConfig, rng: RngStream) -> float:
    """One unconditioned trajectory score."""
    x = _trajectory_sup(
        rng.generator, cfg.a, cfg.b, cfg.beta, cfg.dt,
        cfg.u0[0], cfg.u0[1], cfg.max_steps,
    )
    if math.isnan(x):
        raise NonTerminatingTrajectoryError(
            f"trajectory exceeded {cfg.max_steps} steps without absorption"
        )
    return float(x)


def diffusion_scores(cfg: DiffusionConfig, rng: RngStream, n: int) -> np.ndarray:
    """n unconditioned scores in one kernel call (crude MC helper)."""
    out = _crude_scores(
        rng.generator, cfg.a, cfg.b, cfg.beta, cfg.dt,
        cfg.u0[0], cfg.u0[1], cfg.max_steps, n,
    )
    if np.isnan(out).any():
        raise NonTerminatingTrajectoryError(
            f"a trajectory exceeded {cfg.max_steps} steps without absorption"
        )
    return out


def diffusion_conditional(
    cfg: DiffusionConfig, bound: float, strictness: Strictness, rng: RngStream
) -> float:
    """Exact conditional score by acceptance-rejection."""
    x = _conditional_score(
        rng.generator, cfg.a, cfg.b, cfg.beta, cfg.dt,
        cfg.u0[0], cfg.u0[1], cfg.max_steps,
        bound, strictness is Strictness.STRICT, cfg.rejection_cap,
    )
    if math.isnan(x):
        raise NonTerminatingTrajectoryError(
            f"trajectory exceeded {cfg.max_steps} steps without absorption"
        )
    if x == -math.inf:
        raise StarvationError(
            f"no score {'>' if strictness is Strictness.STRICT else '>='} {bound} "
            f"in {cfg.rejection_cap} trajectories"
        )
    return float(x)


class DiffusionSampler:
    """Conditional-sampler protocol wrapper around a DiffusionConfig."""

    requires_lockstep = False

    def __init__(self, cfg: DiffusionConfig):
        self.cfg = cfg

    def sample_initial(self, rng: RngStream) -> float:
        return diffusion_score(self.cfg, rng)

    def sample_above(
        self, bound: float, strictness: Strictness, rng: RngStream
    ) -> float:
        return diffusion_conditional(self.cfg, bound, strictness, rng)
