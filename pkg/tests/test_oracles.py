"""Oracle machinery must itself be calibrated before it judges anything."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.stats import kstest

from splitwalk import BudgetError, CountLawSpec, DegenerateLawError, Strictness
from splitwalk.oracles import (
    brute_force_count,
    chisq_gof,
    negbin_expectation,
    poisson_expectation,
)
from splitwalk.targets import SatProblem


class TestChisqGof:
    def test_requires_enough_samples(self):
        law = CountLawSpec(poisson_rate=2.0, atoms=(), kind=Strictness.NONSTRICT)
        with pytest.raises(ValueError):
            chisq_gof([1, 2, 3], law)

    def test_rejects_wrong_law(self):
        gen = np.random.default_rng(1)
        samples = gen.poisson(5.0, size=5000)
        law = CountLawSpec(poisson_rate=2.0, atoms=(), kind=Strictness.NONSTRICT)
        assert chisq_gof(samples, law).p_value < 1e-6

    def test_accepts_right_law(self):
        gen = np.random.default_rng(2)
        samples = gen.poisson(2.0, size=5000)
        law = CountLawSpec(poisson_rate=2.0, atoms=(), kind=Strictness.NONSTRICT)
        result = chisq_gof(samples, law)
        assert result.p_value >= 0.01
        assert result.dof == len(result.bins) - 1

    def test_bins_pool_to_minimum_expectation(self):
        gen = np.random.default_rng(3)
        samples = gen.poisson(2.0, size=1200)
        law = CountLawSpec(poisson_rate=2.0, atoms=(), kind=Strictness.NONSTRICT)
        result = chisq_gof(samples, law)
        for _, _, expected in result.bins:
            assert expected >= 5.0
        total_obs = sum(obs for _, obs, _ in result.bins)
        assert total_obs == 1200

    def test_degenerate_law_refused(self):
        # Everything pools into one bin: no degrees of freedom left.
        law = CountLawSpec(poisson_rate=1e-9, atoms=(), kind=Strictness.NONSTRICT)
        with pytest.raises(DegenerateLawError):
            chisq_gof(np.zeros(2000, dtype=int), law)

    def test_pvalues_uniform_under_null(self):
        # 200 replications of a correct-law test: p-values must look U(0,1).
        law = CountLawSpec(poisson_rate=2.0, atoms=(), kind=Strictness.NONSTRICT)
        gen = np.random.default_rng(4)
        pvals = [
            chisq_gof(gen.poisson(2.0, size=10_000), law).p_value
            for _ in range(200)
        ]
        assert kstest(pvals, "uniform").pvalue >= 0.01

    def test_detects_mixture_vs_pure_poisson(self):
        # Same mean, fatter tail: the geometric atom must be visible.
        law_atom = CountLawSpec(
            poisson_rate=2.0, atoms=(0.4,), kind=Strictness.NONSTRICT
        )
        mean_extra = 1 / 0.4 - 1
        law_pois = CountLawSpec(
            poisson_rate=2.0 + mean_extra, atoms=(), kind=Strictness.NONSTRICT
        )
        gen = np.random.default_rng(5)
        samples = gen.poisson(2.0, 20_000) + gen.geometric(0.4, 20_000) - 1
        assert chisq_gof(samples, law_atom).p_value >= 0.01
        assert chisq_gof(samples, law_pois).p_value < 1e-6


class TestExpectations:
    def test_negbin_constant(self):
        assert negbin_expectation(lambda t: 1.0, N=7, p=0.3) == pytest.approx(
            1.0, abs=1e-10
        )

    def test_negbin_mean(self):
        # E[T] = N (1-p)/p
        n, p = 6, 0.25
        assert negbin_expectation(lambda t: float(t), N=n, p=p) == pytest.approx(
            n * (1 - p) / p, abs=1e-8
        )

    def test_poisson_mean(self):
        assert poisson_expectation(lambda k: float(k), lam=3.7) == pytest.approx(
            3.7, abs=1e-9
        )

    def test_poisson_zero_rate(self):
        assert poisson_expectation(lambda k: k + 2.0, lam=0.0) == 2.0


class TestBruteForce:
    def test_budget_guard(self):
        p = SatProblem(n=27, m=1, clauses=((1,),))
        with pytest.raises(BudgetError):
            brute_force_count(p)

    def test_known_small_formula(self):
        # x1 and (x2 or x3): 1 * 3 = 3 satisfying assignments.
        p = SatProblem(n=3, m=2, clauses=((1,), (2, 3)))
        assert brute_force_count(p) == 3
