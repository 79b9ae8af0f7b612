"""Increasing random walks over conditional-samplable targets.

A walk starts from an unconditioned draw and repeatedly replaces its state
by a draw conditioned to exceed it (strictly or not), recording every state
at or below the level x and stopping at the first state above x.  The
recorded count is the quantity whose law the distributions module computes.

Pure-Poisson mode additionally pairs one fresh uniform with every draw
(initial included) and counts, per run of tied states, the first arrival
plus every tied draw whose uniform beats the running record.  Record
counting, not ascent counting: the record u starts at the first arrival's
uniform and updates only when beaten, which is the reading under which the
corrected total is exactly Poisson.

Batches are bitwise reproducible for a fixed (seed, N) no matter how many
workers run them: walk i draws from the counter-based stream (seed, i), so
scheduling cannot reorder anyone's randomness.  Samplers that share state
across walks (the SAT population sampler) set ``requires_lockstep`` and are
driven sequentially, always advancing the walk with the lowest current
score; parallelism is ignored for them.
"""

from __future__ import annotations

import enum
import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .distributions import Strictness
from .errors import RunawayWalkError, SplitwalkError
from .rng import RngStream

DEFAULT_MAX_DRAWS = 10_000_000


class WalkMode(enum.Enum):
    STRICT = "Strict"
    NONSTRICT = "NonStrict"
    NONSTRICT_WITH_PURE_POISSON = "NonStrictWithPurePoisson"

    @property
    def strictness(self) -> Strictness:
        return Strictness.STRICT if self is WalkMode.STRICT else Strictness.NONSTRICT

    @property
    def tracks_pure_poisson(self) -> bool:
        return self is WalkMode.NONSTRICT_WITH_PURE_POISSON


class ConditionalSampler(Protocol):
    """Behavioral contract of a target model.

    sample_above must return values distributed as the target law
    conditioned on exceeding the bound (strictly or not); each
    implementation documents whether that law is exact or a Markov kernel
    approximation.  Implementations whose draws mutate shared state must
    set ``requires_lockstep = True``.
    """

    requires_lockstep: bool = False

    def sample_initial(self, rng: RngStream) -> float: ...

    def sample_above(
        self, bound: float, strictness: Strictness, rng: RngStream
    ) -> float: ...


@dataclass(frozen=True, eq=False)
class WalkRecord:
    """One realized walk: its states at or below the level, and its counts."""

    states: np.ndarray
    count: int
    pure_poisson_count: int | None
    level: float
    mode: WalkMode

    def __post_init__(self) -> None:
        if self.count != len(self.states):
            raise ValueError("count must equal the number of recorded states")
        if self.states.size and np.any(np.diff(self.states) < 0):
            raise ValueError("states must be non-decreasing")
        if self.pure_poisson_count is not None and self.pure_poisson_count > self.count:
            raise ValueError("pure_poisson_count cannot exceed count")


class _WalkCursor:
    """Incremental walk state, advanced one conditional draw at a time.

    Split out from run_walk so the lockstep batch driver can interleave
    many walks deterministically.
    """

    __slots__ = (
        "sampler", "level", "mode", "rng", "max_draws",
        "states", "pure_poisson", "record_u", "draws", "current", "done",
    )

    def __init__(self, sampler, level: float, mode: WalkMode, rng: RngStream,
                 max_draws: int):
        self.sampler = sampler
        self.level = float(level)
        self.mode = mode
        self.rng = rng
        self.max_draws = max_draws
        self.states: list[float] = []
        self.pure_poisson = 0
        self.record_u = 0.0
        self.draws = 0
        self.current = -np.inf
        self.done = False

    def _absorb(self, state: float, paired_u: float | None) -> None:
        if state > self.level:
            self.done = True
            return
        first_arrival = not self.states or state != self.states[-1]
        self.states.append(state)
        if self.mode.tracks_pure_poisson:
            if first_arrival:
                self.pure_poisson += 1
                self.record_u = paired_u
            elif paired_u > self.record_u:
                self.pure_poisson += 1
                self.record_u = paired_u
        self.current = state

    def start(self) -> None:
        state = self.sampler.sample_initial(self.rng)
        u = self.rng.uniform() if self.mode.tracks_pure_poisson else None
        self._absorb(state, u)

    def step(self) -> None:
        if self.draws >= self.max_draws:
            raise RunawayWalkError(
                f"walk exceeded {self.max_draws} conditional draws below level "
                f"{self.level}; the exceedance probability may be 0"
            )
        self.draws += 1
        state = self.sampler.sample_above(self.current, self.mode.strictness, self.rng)
        u = self.rng.uniform() if self.mode.tracks_pure_poisson else None
        self._absorb(state, u)

    def record(self) -> WalkRecord:
        return WalkRecord(
            states=np.asarray(self.states, dtype=float),
            count=len(self.states),
            pure_poisson_count=self.pure_poisson if self.mode.tracks_pure_poisson else None,
            level=self.level,
            mode=self.mode,
        )


def run_walk(
    sampler: ConditionalSampler,
    x: float,
    mode: WalkMode,
    rng: RngStream,
    max_draws: int = DEFAULT_MAX_DRAWS,
) -> WalkRecord:
    """Run one walk to completion."""
    cursor = _WalkCursor(sampler, x, mode, rng, max_draws)
    cursor.start()
    while not cursor.done:
        cursor.step()
    return cursor.record()


def _run_one_indexed(sampler, x, mode, seed, i, max_draws) -> WalkRecord:
    try:
        return run_walk(sampler, x, mode, RngStream(seed, i), max_draws)
    except SplitwalkError as exc:
        raise type(exc)(f"walk {i}: {exc}") from exc


def run_batch(
    sampler: ConditionalSampler,
    x: float,
    mode: WalkMode,
    N: int,
    seed: int,
    parallelism: int = 1,
    max_draws: int = DEFAULT_MAX_DRAWS,
) -> list[WalkRecord]:
    """Run N independent walks; results identical for any parallelism."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")

    if getattr(sampler, "requires_lockstep", False):
        return _run_lockstep(sampler, x, mode, N, seed, max_draws)

    if parallelism == 1:
        return [_run_one_indexed(sampler, x, mode, seed, i, max_draws) for i in range(N)]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        futures = [
            pool.submit(_run_one_indexed, sampler, x, mode, seed, i, max_draws)
            for i in range(N)
        ]
        return [f.result() for f in futures]


def _run_lockstep(sampler, x, mode, N, seed, max_draws) -> list[WalkRecord]:
    """Advance the lowest-score walk first, ties by walk index.

    Samplers with a shared archive see one deterministic interleaving, so
    batches reproduce bitwise regardless of the parallelism setting (which
    is ignored here and documented as such).
    """
    cursors = [
        _WalkCursor(sampler, x, mode, RngStream(seed, i), max_draws) for i in range(N)
    ]
    for i, c in enumerate(cursors):
        try:
            c.start()
        except SplitwalkError as exc:
            raise type(exc)(f"walk {i}: {exc}") from exc
    heap = [(c.current, i) for i, c in enumerate(cursors) if not c.done]
    heapq.heapify(heap)
    while heap:
        _, i = heapq.heappop(heap)
        c = cursors[i]
        try:
            c.step()
        except SplitwalkError as exc:
            raise type(exc)(f"walk {i}: {exc}") from exc
        if not c.done:
            heapq.heappush(heap, (c.current, i))
    return [c.record() for c in cursors]


def merge_states(records: list[WalkRecord]):
    """Merge and sort all states of a batch.

    Returns (merged array, total count, total pure-Poisson count or None).
    """
    if not records:
        return np.array([], dtype=float), 0, None
    level = records[0].level
    mode = records[0].mode
    for r in records:
        if r.level != level or r.mode is not mode:
            raise ValueError("records must share one level and mode to merge")
    merged = np.sort(np.concatenate([r.states for r in records]))
    total = int(sum(r.count for r in records))
    if mode.tracks_pure_poisson:
        total_pp = int(sum(r.pure_poisson_count for r in records))
    else:
        total_pp = None
    return merged, total, total_pp


def derive_strict_counts(records: list[WalkRecord]) -> dict[float, int]:
    """First-trial failure counts per repeated merged value.

    For each value d appearing at least twice in the merged sequence of a
    non-strict batch, counts the walks whose first draw upon reaching
    [d, inf) landed exactly on d.  States are non-decreasing, so that is
    simply the number of walks that visited d at all.  These counts are the
    run lengths a native strict batch would have produced at the repeated
    values, enabling the strict MVUE without separate strict runs.
    """
    for r in records:
        if r.mode is WalkMode.STRICT:
            raise ValueError("derive_strict_counts needs non-strict records")
    merged = np.concatenate([r.states for r in records]) if records else np.array([])
    if merged.size == 0:
        return {}
    values, counts = np.unique(merged, return_counts=True)
    repeated = values[counts >= 2]
    out: dict[float, int] = {float(d): 0 for d in repeated}
    if not out:
        return out
    for r in records:
        for d in np.unique(r.states):
            key = float(d)
            if key in out:
                out[key] += 1
    return out
