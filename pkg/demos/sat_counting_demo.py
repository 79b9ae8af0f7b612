"""Counting satisfying assignments of a random 3-SAT formula.

With X = number of satisfied clauses of a uniform random assignment,
P(X >= m) = |S| / 2^n, so a rare-event estimate of the exceedance
probability is a model count.  Scores are integers: the walk climbs a
ladder of atoms, and the non-strict estimator handles the ties exactly.
The instance is small enough to brute-force, so the answer is checkable.
"""

import numpy as np

from splitwalk import (
    WalkMode,
    brute_force_count,
    estimate_nonstrict,
    merge_states,
    rle,
    run_batch,
)
from splitwalk.targets import SatProblem, SatSampler, serialize_dimacs


N_VARS = 12
N_CLAUSES = 40
N = 200
REPS = 30
SWEEPS = 5


def random_instance(gen: np.random.Generator) -> SatProblem:
    clauses = []
    for _ in range(N_CLAUSES):
        vs = gen.choice(N_VARS, size=3, replace=False) + 1
        signs = gen.choice([-1, 1], size=3)
        clauses.append(tuple(int(s * v) for s, v in zip(signs, vs)))
    return SatProblem(n=N_VARS, m=N_CLAUSES, clauses=tuple(clauses))


def main() -> None:
    gen = np.random.default_rng(424242)
    problem = random_instance(gen)
    while brute_force_count(problem) == 0:   # need at least one model
        problem = random_instance(gen)

    exact = brute_force_count(problem)
    print(f"instance: {problem.n} variables, {problem.m} clauses")
    print(serialize_dimacs(problem).splitlines()[0])
    print(f"exact model count (brute force): {exact}")

    level = problem.m - 0.5   # walk stops once every clause is satisfied
    estimates = np.empty(REPS)
    for rep in range(REPS):
        sampler = SatSampler(problem, sweeps=SWEEPS)
        records = run_batch(
            sampler, level, WalkMode.NONSTRICT, N=N, seed=3_000 + rep
        )
        merged, _, _ = merge_states(records)
        estimates[rep] = estimate_nonstrict(rle(merged), N).p_hat

    scale = 2.0 ** problem.n
    counts = estimates * scale
    se = counts.std(ddof=1) / np.sqrt(REPS)
    print(f"\n{REPS} replications of N = {N} walks, {SWEEPS} Gibbs sweeps/draw:")
    print(f"estimated model count: {counts.mean():.2f} +/- {se:.2f}")
    print(f"exact               : {exact}")


if __name__ == "__main__":
    main()
