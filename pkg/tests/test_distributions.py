"""Count-law construction, pmf normalization, and closed-form moments."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitwalk import (
    CountLawSpec,
    DistSpec,
    RngStream,
    Strictness,
    batch_law,
    count_law_moments,
    count_law_pmf,
    count_law_pmf_vector,
    draw,
)

CANON_P = 0.07
CANON_DELTAS = (7.0 / 13.0,)


class TestDistSpec:
    @pytest.mark.parametrize(
        "spec, mean, var",
        [
            (DistSpec.uniform01(), 0.5, 1.0 / 12.0),
            (DistSpec.bernoulli(0.3), 0.3, 0.21),
            (DistSpec.geometric(0.25), 3.0, 12.0),
            (DistSpec.poisson(4.0), 4.0, 4.0),
        ],
    )
    def test_mean_variance_closed_forms(self, spec, mean, var):
        got_mean, got_var = spec.mean_variance()
        assert got_mean == pytest.approx(mean)
        assert got_var == pytest.approx(var)

    @pytest.mark.parametrize(
        "spec",
        [
            DistSpec.uniform01(),
            DistSpec.bernoulli(0.3),
            DistSpec.geometric(0.25),
            DistSpec.poisson(4.0),
        ],
    )
    def test_draw_moments_match(self, spec):
        # 1e5 draws: sample mean within 4 standard errors of the exact mean.
        rng = RngStream(seed=101, stream_id=0)
        n = 100_000
        draws = np.array([draw(spec, rng) for _ in range(n)])
        mean, var = spec.mean_variance()
        se = math.sqrt(var / n)
        assert abs(draws.mean() - mean) < 4.0 * se
        assert draws.var() == pytest.approx(var, rel=0.05)

    def test_geometric_counts_failures(self):
        # Support starts at 0, not 1.
        rng = RngStream(seed=7, stream_id=0)
        spec = DistSpec.geometric(0.9)
        draws = [draw(spec, rng) for _ in range(2000)]
        assert min(draws) == 0

    def test_invalid_params_rejected(self):
        with pytest.raises(ValueError):
            DistSpec.bernoulli(1.5)
        with pytest.raises(ValueError):
            DistSpec.geometric(0.0)
        with pytest.raises(ValueError):
            DistSpec.poisson(-1.0)


class TestCountLawSpec:
    def test_for_level_rate(self):
        law = CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.NONSTRICT)
        # lambda = -(log p - sum log Delta)
        assert law.poisson_rate == pytest.approx(2.0402208285265546, abs=1e-14)
        assert law.atoms == CANON_DELTAS

    def test_for_level_rejects_impossible(self):
        # p_x larger than the product of atom survivals has no Poisson rate.
        with pytest.raises(ValueError):
            CountLawSpec.for_level(0.9, (0.5,), Strictness.NONSTRICT)

    def test_atom_validation(self):
        with pytest.raises(ValueError):
            CountLawSpec(poisson_rate=1.0, atoms=(0.0,), kind=Strictness.STRICT)
        with pytest.raises(ValueError):
            CountLawSpec(poisson_rate=-0.5, atoms=(), kind=Strictness.STRICT)

    def test_nonstrict_moments_closed_form(self):
        law = CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.NONSTRICT)
        mean, var = count_law_moments(law)
        # lambda + (1/Delta - 1), lambda + (1/Delta)(1/Delta - 1)
        assert mean == pytest.approx(2.897363685669412, abs=1e-14)
        assert var == pytest.approx(3.6320575632204326, abs=1e-14)

    def test_strict_moments_closed_form(self):
        law = CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.STRICT)
        mean, var = count_law_moments(law)
        d = CANON_DELTAS[0]
        lam = 2.0402208285265546
        assert mean == pytest.approx(lam + (1.0 - d), abs=1e-13)
        assert var == pytest.approx(lam + d * (1.0 - d), abs=1e-13)

    def test_pmf_vector_normalizes(self):
        # Normalization to 1e-10 for moderate rates and up to a few atoms.
        law = CountLawSpec(
            poisson_rate=2.04,
            atoms=(7.0 / 13.0, 0.25, 0.8),
            kind=Strictness.NONSTRICT,
        )
        pmf = count_law_pmf_vector(law, upto=400)
        assert pmf.sum() == pytest.approx(1.0, abs=1e-10)

    def test_pmf_moments_match_closed_forms(self):
        law = CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.NONSTRICT)
        pmf = count_law_pmf_vector(law, upto=200)
        k = np.arange(pmf.size)
        mean_pmf = float(k @ pmf)
        var_pmf = float((k - mean_pmf) ** 2 @ pmf)
        mean, var = count_law_moments(law)
        assert mean_pmf == pytest.approx(mean, abs=1e-9)
        assert var_pmf == pytest.approx(var, abs=1e-9)

    def test_pure_poisson_matches_scipy(self):
        from scipy.stats import poisson

        law = CountLawSpec(poisson_rate=3.7, atoms=(), kind=Strictness.NONSTRICT)
        for k in range(20):
            assert count_law_pmf(law, k) == pytest.approx(
                poisson.pmf(k, 3.7), abs=1e-13
            )

    def test_strict_law_with_sure_atom_is_poisson(self):
        # Delta = 1 contributes nothing in either convention.
        base = CountLawSpec(poisson_rate=2.5, atoms=(), kind=Strictness.STRICT)
        with_atom = CountLawSpec(
            poisson_rate=2.5, atoms=(1.0,), kind=Strictness.STRICT
        )
        a = count_law_pmf_vector(base, upto=60)
        b = count_law_pmf_vector(with_atom, upto=60)
        np.testing.assert_allclose(a, b, atol=1e-13)

    def test_batch_law_scales(self):
        law = CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.NONSTRICT)
        batched = batch_law(law, 100)
        assert batched.poisson_rate == pytest.approx(100 * law.poisson_rate)
        assert len(batched.atoms) == 100
        mean1, var1 = count_law_moments(law)
        mean100, var100 = count_law_moments(batched)
        assert mean100 == pytest.approx(100 * mean1, rel=1e-12)
        assert var100 == pytest.approx(100 * var1, rel=1e-12)

    def test_batched_pmf_normalizes(self):
        law = batch_law(
            CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.STRICT), 20
        )
        pmf = count_law_pmf_vector(law, upto=200)
        assert pmf.sum() == pytest.approx(1.0, abs=1e-10)

    @given(
        rate=st.floats(min_value=0.1, max_value=30.0),
        deltas=st.lists(
            st.floats(min_value=0.05, max_value=0.999), min_size=0, max_size=4
        ),
        kind=st.sampled_from([Strictness.STRICT, Strictness.NONSTRICT]),
    )
    @settings(max_examples=40, deadline=None)
    def test_pmf_is_a_distribution(self, rate, deltas, kind):
        law = CountLawSpec(poisson_rate=rate, atoms=tuple(deltas), kind=kind)
        pmf = count_law_pmf_vector(law, upto=600)
        assert np.all(pmf >= -1e-15)
        assert pmf.sum() == pytest.approx(1.0, abs=1e-8)

    def test_strict_batch_mean_below_nonstrict(self):
        # Ties only ever remove counts under the strict convention.
        ns = CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.NONSTRICT)
        s = CountLawSpec.for_level(CANON_P, CANON_DELTAS, Strictness.STRICT)
        assert count_law_moments(s)[0] < count_law_moments(ns)[0]
