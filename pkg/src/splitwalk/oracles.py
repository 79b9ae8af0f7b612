"""Independent references that validate the stochastic machinery.

Everything here is deliberately dumb and exact: exhaustive enumeration,
direct PMF summation, and a textbook chi-square. Large runs earn trust by
first agreeing with these on small instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .distributions import CountLawSpec, count_law_pmf_vector
from .errors import BudgetError, DegenerateLawError
from .targets.sat import SatProblem

_MAX_BRUTE_VARS = 26
_BLOCK_BITS = 20  # enumerate assignments in blocks of 2^20


def brute_force_count(problem: SatProblem) -> int:
    """Exact number of satisfying assignments by exhaustive enumeration."""
    if problem.n > _MAX_BRUTE_VARS:
        raise BudgetError(
            f"n={problem.n} exceeds the exhaustive budget of {_MAX_BRUTE_VARS} variables"
        )
    total = 0
    block = 1 << min(_BLOCK_BITS, problem.n)
    for start in range(0, 1 << problem.n, block):
        patterns = np.arange(start, start + block, dtype=np.uint64)
        ok = np.ones(block, dtype=bool)
        for clause in problem.clauses:
            sat = np.zeros(block, dtype=bool)
            for lit in clause:
                bit = (patterns >> np.uint64(abs(lit) - 1)) & np.uint64(1)
                sat |= (bit == 1) if lit > 0 else (bit == 0)
            ok &= sat
        total += int(ok.sum())
    return total


@dataclass(frozen=True)
class GofResult:
    statistic: float
    dof: int
    p_value: float
    bins: tuple[tuple[str, float, float], ...]  # (support label, observed, expected)


def chisq_gof(samples, law: CountLawSpec) -> GofResult:
    """Pearson chi-square of observed counts against the law's exact PMF.

    Adjacent support points pool left to right until every bin's expected
    count reaches 5; the open upper tail forms the final bin.
    """
    arr = np.asarray(samples, dtype=np.int64)
    if arr.size < 1000:
        raise ValueError(f"need >= 1000 samples for a stable test, got {arr.size}")
    if arr.min() < 0:
        raise ValueError("counts must be >= 0")
    n = arr.size

    kmax = int(arr.max())
    pmf = count_law_pmf_vector(law, kmax)
    tail = max(1.0 - pmf.sum(), 0.0)
    observed_full = np.bincount(arr, minlength=kmax + 1).astype(float)
    expected_full = np.concatenate((pmf * n, [tail * n]))
    observed_full = np.concatenate((observed_full, [0.0]))  # open tail bin

    # greedy adjacent pooling to expected >= 5
    bins: list[tuple[str, float, float]] = []
    obs_acc = exp_acc = 0.0
    lo = 0
    for k in range(len(expected_full)):
        obs_acc += observed_full[k]
        exp_acc += expected_full[k]
        if exp_acc >= 5.0:
            label = f"{lo}" if lo == k else f"{lo}-{k}"
            if k == len(expected_full) - 1:
                label = f"{lo}+"
            bins.append((label, obs_acc, exp_acc))
            obs_acc = exp_acc = 0.0
            lo = k + 1
    if exp_acc > 0.0 or obs_acc > 0.0:
        if bins:
            label, o, e = bins.pop()
            bins.append((f"{label.split('-')[0]}+", o + obs_acc, e + exp_acc))
        else:
            bins.append((f"{lo}+", obs_acc, exp_acc))

    if len(bins) < 2:
        raise DegenerateLawError(
            "law mass concentrates on a single pooled bin; chi-square undefined"
        )
    obs = np.array([b[1] for b in bins])
    exp = np.array([b[2] for b in bins])
    stat = float(((obs - exp) ** 2 / exp).sum())
    dof = len(bins) - 1
    p_value = float(stats.chi2.sf(stat, dof))
    return GofResult(stat, dof, p_value, tuple(bins))


def negbin_expectation(fn, N: int, p: float) -> float:
    """E[fn(T)] for T ~ NegativeBinomial(N, p) counting failures before the
    N-th success; summation truncated where the remaining tail < 1e-12."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not (0.0 < p <= 1.0):
        raise ValueError(f"p must lie in (0,1], got {p}")
    if p == 1.0:
        return float(fn(0))
    dist = stats.nbinom(N, p)
    upto = int(dist.isf(1e-13)) + 1
    ts = np.arange(upto + 1)
    pmf = dist.pmf(ts)
    vals = np.array([fn(int(t)) for t in ts], dtype=float)
    return float(np.dot(pmf, vals))


def poisson_expectation(fn, lam: float) -> float:
    """E[fn(K)] for K ~ Poisson(lam), tail-truncated below 1e-12."""
    if lam < 0:
        raise ValueError(f"rate must be >= 0, got {lam}")
    if lam == 0.0:
        return float(fn(0))
    upto = int(stats.poisson.isf(1e-13, lam)) + 1
    ks = np.arange(upto + 1)
    pmf = stats.poisson.pmf(ks, lam)
    vals = np.array([fn(int(k)) for k in ks], dtype=float)
    return float(np.dot(pmf, vals))
