"""Probability estimators and variance formulas for merged walk output.

The sufficient statistic of N merged walks is the run-length encoding of
their sorted states: runs of length 1 come from the continuous part of the
score law, longer runs from its atoms.  Three unbiased estimators consume
it:

  non-strict MVUE   prod_i (N-1)/(N-1+r_i)
  strict MVUE       prod_i (1 - r_i/N)
  pure Poisson      (1 - 1/N)^M  with M the corrected total count

All products are computed as exponentiated log sums: the SAT targets push
p below 1e-19 with thousands of factors, where naive products lose digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RunLengthEncoding:
    """Maximal runs of equal values in a non-decreasing sequence.

    values:  strictly increasing run values.
    lengths: positive run lengths; sum equals the encoded sequence length.
    """

    values: tuple[float, ...]
    lengths: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.lengths):
            raise ValueError("values and lengths must have equal length")

    @property
    def total(self) -> int:
        return int(sum(self.lengths))

    @property
    def num_runs(self) -> int:
        return len(self.lengths)

    def repeated_values(self) -> tuple[float, ...]:
        """Values with run length >= 2 (the observed atoms)."""
        return tuple(v for v, r in zip(self.values, self.lengths) if r >= 2)


class EstimatorKind(enum.Enum):
    STRICT_MVUE = "StrictMVUE"
    NONSTRICT_MVUE = "NonStrictMVUE"
    PURE_POISSON = "PurePoisson"
    CRUDE_MC = "CrudeMC"


@dataclass(frozen=True)
class EstimateReport:
    """One probability estimate and the estimator that produced it.

    standard_error is populated where a closed form exists (crude MC);
    replication-level errors are the experiment module's job.
    """

    p_hat: float
    estimator_kind: EstimatorKind
    N: int
    total_count: int
    runs_summary: RunLengthEncoding | None = None
    standard_error: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_hat <= 1.0):
            raise ValueError(f"p_hat must lie in [0,1], got {self.p_hat}")


def rle(sorted_seq) -> RunLengthEncoding:
    """Run-length encode a non-decreasing sequence of scores."""
    arr = np.asarray(sorted_seq, dtype=float)
    if arr.ndim != 1:
        raise ValueError("input must be one-dimensional")
    if arr.size == 0:
        return RunLengthEncoding((), ())
    if np.any(np.diff(arr) < 0):
        raise ValueError("input must be non-decreasing")
    change = np.flatnonzero(np.diff(arr) != 0)
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change + 1, [arr.size]))
    return RunLengthEncoding(
        tuple(float(v) for v in arr[starts]),
        tuple(int(n) for n in (ends - starts)),
    )


def _require_n(N: int, minimum: int = 2) -> None:
    if N < minimum:
        raise ValueError(f"N must be >= {minimum}, got {N}")


def estimate_nonstrict(r: RunLengthEncoding, N: int) -> EstimateReport:
    """MVUE for non-strict walks: prod (N-1)/(N-1+r_i), in log space."""
    _require_n(N)
    log_p = -sum(math.log1p(ri / (N - 1.0)) for ri in r.lengths)
    return EstimateReport(
        p_hat=math.exp(log_p),
        estimator_kind=EstimatorKind.NONSTRICT_MVUE,
        N=N,
        total_count=r.total,
        runs_summary=r,
    )


def estimate_strict(r: RunLengthEncoding, N: int) -> EstimateReport:
    """MVUE for strict walks: prod (1 - r_i/N); exactly 0 if some r_i = N."""
    _require_n(N)
    for ri in r.lengths:
        if ri > N:
            raise ValueError(f"run length {ri} exceeds N={N}; inconsistent input")
    if any(ri == N for ri in r.lengths):
        p_hat = 0.0
    else:
        log_p = sum(math.log1p(-ri / N) for ri in r.lengths)
        p_hat = math.exp(log_p)
    return EstimateReport(
        p_hat=p_hat,
        estimator_kind=EstimatorKind.STRICT_MVUE,
        N=N,
        total_count=r.total,
        runs_summary=r,
    )


def estimate_pure_poisson(total_pure_poisson: int, N: int) -> EstimateReport:
    """Poisson-corrected estimator: (1 - 1/N)^M, in log space."""
    _require_n(N)
    if total_pure_poisson < 0:
        raise ValueError(f"count must be >= 0, got {total_pure_poisson}")
    log_p = total_pure_poisson * math.log1p(-1.0 / N)
    return EstimateReport(
        p_hat=math.exp(log_p),
        estimator_kind=EstimatorKind.PURE_POISSON,
        N=N,
        total_count=total_pure_poisson,
    )


def mvue_geometric(T: int, N: int) -> float:
    """Unbiased estimate of the success probability from the summed failure
    count T of N independent Geometric trials: (N-1)/(N-1+T)."""
    _require_n(N)
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    return (N - 1.0) / (N - 1.0 + T)


def mvue_bernoulli(S: int, N: int) -> float:
    """Unbiased estimate of the failure probability from S successes in N
    Bernoulli trials: 1 - S/N."""
    _require_n(N)
    if not (0 <= S <= N):
        raise ValueError(f"S must lie in [0, N], got S={S}, N={N}")
    return 1.0 - S / N


def variance_continuous(p: float, N: int) -> float:
    """Estimator variance for a continuous score law: p^2 (p^{-1/N} - 1)."""
    _require_n(N)
    if not (0.0 < p <= 1.0):
        raise ValueError(f"p must lie in (0,1], got {p}")
    return p * p * math.expm1(-math.log(p) / N)


def strict_variance_factor(delta: float, N: int) -> float:
    """Per-atom variance growth factor of the strict MVUE:
    g(Delta, N) = (Delta (N-1) + 1) / (N Delta^{1 - 1/N}); g >= 1."""
    _require_n(N)
    if not (0.0 < delta <= 1.0):
        raise ValueError(f"delta must lie in (0,1], got {delta}")
    return (delta * (N - 1.0) + 1.0) / (N * delta ** (1.0 - 1.0 / N))


def variance_strict(p: float, deltas, N: int) -> float:
    """Strict-MVUE variance: p^2 (p^{-1/N} prod_d g(Delta_d, N) - 1)."""
    _require_n(N)
    if not (0.0 < p <= 1.0):
        raise ValueError(f"p must lie in (0,1], got {p}")
    log_term = -math.log(p) / N
    for d in deltas:
        log_term += math.log(strict_variance_factor(d, N))
    return p * p * math.expm1(log_term)


def variance_bounds_nonstrict(
    p: float, p_pois: float, num_atoms: int, N: int
) -> tuple[float, float]:
    """Sandwich bounds on the non-strict MVUE variance.

    lower = p^2 (p_pois^{-1/N} - 1)
    upper = p^2 (p_pois^{-1/N} ((N-1)/(N-2))^{num_atoms} - 1)

    No closed form exists between them.  N >= 3 because the upper factor
    needs N - 2 > 0.
    """
    _require_n(N, minimum=3)
    if not (0.0 < p <= p_pois <= 1.0):
        raise ValueError(f"need 0 < p <= p_pois <= 1, got p={p}, p_pois={p_pois}")
    if num_atoms < 0:
        raise ValueError(f"num_atoms must be >= 0, got {num_atoms}")
    base = -math.log(p_pois) / N
    lower = p * p * math.expm1(base)
    upper = p * p * math.expm1(base + num_atoms * math.log1p(1.0 / (N - 2.0)))
    return lower, upper


def cv2_upper_bound(num_atoms: int, N: int, p_pois: float = 1.0) -> float:
    """Upper bound on the squared coefficient of variation of the non-strict
    MVUE: p_pois^{-1/N} ((N-1)/(N-2))^{num_atoms} - 1.  With p_pois = 1 the
    bound depends on the score law only through its number of atoms."""
    _require_n(N, minimum=3)
    if not (0.0 < p_pois <= 1.0):
        raise ValueError(f"p_pois must lie in (0,1], got {p_pois}")
    return math.expm1(
        -math.log(p_pois) / N + num_atoms * math.log1p(1.0 / (N - 2.0))
    )


def empirical_cdf(count_at_or_below: int, N: int) -> float:
    """CDF estimate at a query point from the merged count M at or below it:
    F_N = 1 - (1 - 1/N)^M."""
    _require_n(N)
    if count_at_or_below < 0:
        raise ValueError(f"count must be >= 0, got {count_at_or_below}")
    return -math.expm1(count_at_or_below * math.log1p(-1.0 / N))


class CdfEstimate:
    """Monotone step-function CDF estimate built from merged walk states.

    Queries above the walk level are out of domain: the walks never explored
    there, so the merged count is uninformative beyond it.
    """

    def __init__(self, merged_states, N: int, level: float):
        _require_n(N)
        arr = np.asarray(merged_states, dtype=float)
        if arr.size and np.any(np.diff(arr) < 0):
            raise ValueError("merged states must be non-decreasing")
        self._states = arr
        self._N = N
        self._level = float(level)

    def __call__(self, x0: float) -> float:
        if x0 > self._level:
            raise ValueError(
                f"query {x0} exceeds the walk level {self._level}; out of domain"
            )
        m = int(np.searchsorted(self._states, x0, side="right"))
        return empirical_cdf(m, self._N)


def crude_monte_carlo(indicators) -> EstimateReport:
    """Sample mean of exceedance indicators with binomial standard error."""
    arr = np.asarray(indicators)
    if arr.size == 0:
        raise ValueError("crude_monte_carlo requires at least one indicator")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("indicators must be 0/1 valued")
    n = arr.size
    p_hat = float(arr.mean())
    se = math.sqrt(p_hat * (1.0 - p_hat) / n)
    return EstimateReport(
        p_hat=p_hat,
        estimator_kind=EstimatorKind.CRUDE_MC,
        N=n,
        total_count=int(arr.sum()),
        standard_error=se,
    )
