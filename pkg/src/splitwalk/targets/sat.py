"""SAT-counting target: scores are numbers of satisfied clauses.

The score of a uniform random assignment is X = number of satisfied
clauses, so P(X >= m) = |S| / 2^n counts satisfying assignments.  Scores
are integers: every value the walk visits twice is an atom, and the walk
lives almost entirely on atoms.

Conditional sampling follows the on-the-fly population scheme: an archive
of previously generated assignments, seeded with the walks' initial
unconditioned draws, grows by one member per conditional draw (Geometric
failures included).  A draw picks a uniform archived member meeting the
bound and applies systematic Gibbs sweeps: each coordinate resampled
uniformly over the values of {0,1} that keep the score in the conditioning
domain, the exact single-site conditional of the uniform law on that set.
The archive is shared across the N walks of a batch, which makes walks
weakly dependent; the walk engine therefore drives SAT batches in a
deterministic lockstep order (requires_lockstep below).

The Markov kernel is approximate (finitely many sweeps), unlike the other
two targets; the small-instance exhaustive oracle is the quality arbiter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numba import njit

from ..distributions import Strictness
from ..errors import DimacsParseError, StarvationError
from ..rng import RngStream

# An assignment is a length-n uint8 array of 0/1 values.
Assignment = np.ndarray

DEFAULT_SWEEPS = 5


@dataclass(frozen=True, eq=False)
class SatProblem:
    """CNF instance: n variables, m clauses of nonzero literals in [-n, n]."""

    n: int
    m: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"variable count must be >= 1, got {self.n}")
        if self.m != len(self.clauses):
            raise ValueError(
                f"clause count {self.m} does not match {len(self.clauses)} clauses"
            )
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f"literal {lit} out of range for n={self.n}")

    @cached_property
    def _lit_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Clauses as a 0-padded int32 matrix plus clause lengths."""
        width = max((len(c) for c in self.clauses), default=1)
        mat = np.zeros((self.m, width), dtype=np.int32)
        lens = np.zeros(self.m, dtype=np.int32)
        for j, clause in enumerate(self.clauses):
            mat[j, : len(clause)] = clause
            lens[j] = len(clause)
        return mat, lens

    @cached_property
    def _incidence(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR map variable -> (clause index, literal sign) occurrences."""
        occ: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for j, clause in enumerate(self.clauses):
            for lit in clause:
                occ[abs(lit) - 1].append((j, 1 if lit > 0 else -1))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for i, lst in enumerate(occ):
            indptr[i + 1] = indptr[i] + len(lst)
        vc_clause = np.empty(indptr[-1], dtype=np.int32)
        vc_sign = np.empty(indptr[-1], dtype=np.int8)
        k = 0
        for lst in occ:
            for j, s in lst:
                vc_clause[k] = j
                vc_sign[k] = s
                k += 1
        return indptr, vc_clause, vc_sign


def parse_dimacs(text: str) -> SatProblem:
    """Parse DIMACS CNF text; raises DimacsParseError with a line number."""
    n = m = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break  # satlib trailer: ignore it and anything after
        if line.startswith("p"):
            if n is not None:
                raise DimacsParseError("duplicate problem header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"malformed header {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError(f"non-integer header fields in {line!r}", lineno)
            if n < 1 or m < 0:
                raise DimacsParseError(f"invalid sizes n={n}, m={m}", lineno)
            continue
        if n is None:
            raise DimacsParseError("clause data before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"non-integer token {tok!r}", lineno)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > n:
                raise DimacsParseError(f"literal {lit} out of range (n={n})", lineno)
            else:
                current.append(lit)
    last = max(lineno, 1)
    if n is None:
        raise DimacsParseError("missing 'p cnf' header", last)
    if current:
        raise DimacsParseError("unterminated clause at end of input", last)
    if len(clauses) != m:
        raise DimacsParseError(
            f"header declares {m} clauses but {len(clauses)} were read", last
        )
    return SatProblem(n=n, m=m, clauses=tuple(clauses))


def serialize_dimacs(problem: SatProblem) -> str:
    lines = [f"p cnf {problem.n} {problem.m}"]
    for clause in problem.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def _clause_sat_counts(problem: SatProblem, bits: Assignment) -> np.ndarray:
    """Number of satisfied literal occurrences per clause."""
    mat, _ = problem._lit_matrix
    pos = mat > 0
    neg = mat < 0
    idx = np.abs(mat) - 1
    idx[~(pos | neg)] = 0  # padding; masked below
    vals = bits[idx]
    sat = (pos & (vals == 1)) | (neg & (vals == 0))
    return sat.sum(axis=1).astype(np.int32)


def count_satisfied(problem: SatProblem, assignment: Assignment) -> int:
    """Number of clauses with at least one satisfied literal."""
    bits = np.asarray(assignment, dtype=np.uint8)
    if bits.shape != (problem.n,):
        raise ValueError(
            f"assignment length {bits.shape} does not match n={problem.n}"
        )
    if bits.size and not np.isin(bits, (0, 1)).all():
        raise ValueError("assignment must be 0/1 valued")
    return int((_clause_sat_counts(problem, bits) > 0).sum())


def random_assignment(problem: SatProblem, rng: RngStream) -> Assignment:
    return rng.generator.integers(0, 2, problem.n).astype(np.uint8)


class SatPopulation:
    """Append-only archive of assignments, bucketed by score.

    Picks are uniform over the members meeting a bound; insertion order is
    deterministic under the lockstep walk schedule, so picks reproduce.
    """

    def __init__(self, max_score: int, level: int = 0):
        self.level = level
        self.max_score = max_score
        self._buckets: list[list[Assignment]] = [[] for _ in range(max_score + 1)]
        self._size = 0

    @property
    def size(self) -> int:
        return self._size

    def append(self, bits: Assignment, score: int) -> None:
        if not (self.level <= score <= self.max_score):
            raise ValueError(
                f"score {score} outside [{self.level}, {self.max_score}]"
            )
        self._buckets[score].append(bits)
        self._size += 1

    def count_at_least(self, min_score: int) -> int:
        lo = max(min_score, 0)
        return sum(len(b) for b in self._buckets[lo:])

    def pick_at_least(self, min_score: int, rng: RngStream) -> tuple[Assignment, int]:
        """Uniform pick among members with score >= min_score."""
        total = self.count_at_least(min_score)
        if total == 0:
            raise StarvationError(
                f"archive has no member with score >= {min_score} "
                f"(size {self._size})"
            )
        j = rng.integers(0, total)
        for s in range(max(min_score, 0), self.max_score + 1):
            bucket = self._buckets[s]
            if j < len(bucket):
                return bucket[j], s
            j -= len(bucket)
        raise AssertionError("bucket walk exhausted; counts inconsistent")


@njit(cache=True, nogil=True)
def _flip(bits, sat_cnt, num_sat, indptr, vc_clause, vc_sign, i):
    """Flip variable i, updating clause counts; returns new num_sat."""
    new = 1 - bits[i]
    bits[i] = new
    for k in range(indptr[i], indptr[i + 1]):
        j = vc_clause[k]
        true_now = (vc_sign[k] > 0) == (new == 1)
        if true_now:
            if sat_cnt[j] == 0:
                num_sat += 1
            sat_cnt[j] += 1
        else:
            sat_cnt[j] -= 1
            if sat_cnt[j] == 0:
                num_sat -= 1
    return num_sat


@njit(cache=True, nogil=True)
def _gibbs_sweeps(gen, bits, sat_cnt, num_sat, indptr, vc_clause, vc_sign,
                  min_score, sweeps):
    """Systematic Gibbs sweeps restricted to {score >= min_score}.

    Coordinate rule: tentatively flip; if the flipped score stays in
    domain, both values are admissible and a fair coin picks one,
    otherwise revert.  Exact single-site conditional of the uniform law.
    """
    n = bits.size
    for _ in range(sweeps):
        for i in range(n):
            num_sat = _flip(bits, sat_cnt, num_sat, indptr, vc_clause, vc_sign, i)
            if num_sat >= min_score:
                if gen.random() < 0.5:
                    continue  # keep the flipped value
            num_sat = _flip(bits, sat_cnt, num_sat, indptr, vc_clause, vc_sign, i)
    return num_sat


def _min_score(bound: float, strictness: Strictness) -> int:
    if strictness is Strictness.STRICT:
        return int(math.floor(bound)) + 1
    return int(math.ceil(bound))


def sat_conditional(
    problem: SatProblem,
    population: SatPopulation,
    bound: float,
    strictness: Strictness,
    sweeps: int,
    rng: RngStream,
) -> tuple[Assignment, int]:
    """One population-Gibbs draw conditioned above the bound.

    Picks a uniform qualifying archive member, sweeps it, appends the
    result to the archive, and returns (assignment, score).
    """
    if sweeps < 0:
        raise ValueError(f"sweeps must be >= 0, got {sweeps}")
    lo = _min_score(bound, strictness)
    if lo > problem.m:
        raise StarvationError(
            f"bound {bound} requires score > m={problem.m}; domain empty"
        )
    seed_bits, _ = population.pick_at_least(lo, rng)
    bits = seed_bits.copy()
    sat_cnt = _clause_sat_counts(problem, bits)
    num_sat = int((sat_cnt > 0).sum())
    indptr, vc_clause, vc_sign = problem._incidence
    score = int(
        _gibbs_sweeps(
            rng.generator, bits, sat_cnt, num_sat,
            indptr, vc_clause, vc_sign, lo, sweeps,
        )
    )
    population.append(bits, score)
    return bits, score


class SatSampler:
    """Conditional-sampler protocol over a shared on-the-fly population.

    Shared-archive draws make walks dependent, so batches must interleave
    deterministically: requires_lockstep asks the walk engine for its
    sequential lowest-score-first schedule (parallelism is ignored).
    """

    requires_lockstep = True

    def __init__(self, problem: SatProblem, sweeps: int = DEFAULT_SWEEPS):
        self.problem = problem
        self.sweeps = sweeps
        self.population = SatPopulation(max_score=problem.m)

    def sample_initial(self, rng: RngStream) -> float:
        bits = random_assignment(self.problem, rng)
        score = count_satisfied(self.problem, bits)
        self.population.append(bits, score)
        return float(score)

    def sample_above(
        self, bound: float, strictness: Strictness, rng: RngStream
    ) -> float:
        _, score = sat_conditional(
            self.problem, self.population, bound, strictness, self.sweeps, rng
        )
        return float(score)
