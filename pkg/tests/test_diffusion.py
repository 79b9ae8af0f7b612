"""Overdamped double-well diffusion target: gradient, scores, atom structure."""

from __future__ import annotations

import numpy as np
import pytest

from splitwalk import RngStream, StarvationError, Strictness, WalkMode, run_batch
from splitwalk.targets import (
    DiffusionConfig,
    DiffusionSampler,
    diffusion_conditional,
    diffusion_score,
    diffusion_scores,
)
from splitwalk.targets.diffusion import gradient, potential

# Initial score: Phi(u0) = 0.5 * (1 - 0.9) = 0.05, stored with one rounding.
INITIAL_SCORE = 0.5 * (1.0 + -0.9)


class TestPotential:
    @pytest.mark.parametrize(
        "u1, u2", [(0.3, -0.4), (-0.9, 0.0), (1.2, 0.7), (-0.2, -1.1)]
    )
    def test_gradient_matches_finite_differences(self, u1, u2):
        a, b = 0.61, 0.37
        h = 1e-6
        g1, g2 = gradient(u1, u2, a, b)
        fd1 = (potential(u1 + h, u2, a, b) - potential(u1 - h, u2, a, b)) / (2 * h)
        fd2 = (potential(u1, u2 + h, a, b) - potential(u1, u2 - h, a, b)) / (2 * h)
        assert g1 == pytest.approx(fd1, abs=1e-8)
        assert g2 == pytest.approx(fd2, abs=1e-8)

    def test_wells_are_critical_points(self):
        g1, g2 = gradient(1.0, 0.0, 0.6, 0.3)
        assert (g1, g2) == (0.0, 0.0)
        g1, g2 = gradient(-1.0, 0.0, 0.6, 0.3)
        assert (g1, g2) == (0.0, 0.0)


class TestScores:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            DiffusionConfig(beta=-1.0)
        with pytest.raises(ValueError):
            DiffusionConfig(dt=0.0)

    def test_scores_bounded_below_by_initial(self):
        # Right-exit suprema overshoot 1.0 by at most one Euler step, so the
        # only hard bound is the initial score from below.
        cfg = DiffusionConfig()
        xs = diffusion_scores(cfg, RngStream(1, 0), 5000)
        assert np.all(xs >= INITIAL_SCORE)
        assert xs.max() > 1.0  # some right exits in 5000 draws
        assert xs.max() < 2.0

    def test_score_at_least_initial(self):
        # The supremum includes time zero, so no score sits below Phi(u0).
        cfg = DiffusionConfig()
        assert diffusion_score(cfg, RngStream(2, 0)) >= INITIAL_SCORE

    def test_single_vs_vector_agree(self):
        cfg = DiffusionConfig()
        one = diffusion_score(cfg, RngStream(3, 7))
        vec = diffusion_scores(cfg, RngStream(3, 7), 4)
        assert one == vec[0]

    def test_atom_value_is_reachable(self):
        # Trajectories absorbed on the left without ever beating Phi(u0)
        # score exactly the initial value; that is 1 - Delta of all runs.
        cfg = DiffusionConfig()
        xs = diffusion_scores(cfg, RngStream(4, 0), 20_000)
        frac_at_atom = np.mean(xs == INITIAL_SCORE)
        assert 0.55 < frac_at_atom < 0.65  # 1 - Delta, measured near 0.604


class TestConditional:
    def test_strict_conditional_exceeds_bound(self):
        cfg = DiffusionConfig()
        rng = RngStream(5, 0)
        for bound in (0.1, 0.3, 0.5):
            for _ in range(20):
                x = diffusion_conditional(cfg, bound, Strictness.STRICT, rng)
                assert x > bound

    def test_nonstrict_conditional_can_sit_on_the_atom(self):
        cfg = DiffusionConfig()
        rng = RngStream(5, 1)
        draws = [
            diffusion_conditional(cfg, INITIAL_SCORE, Strictness.NONSTRICT, rng)
            for _ in range(200)
        ]
        assert all(x >= INITIAL_SCORE for x in draws)
        assert any(x == INITIAL_SCORE for x in draws)

    def test_starvation_at_unreachable_bound(self):
        # A supremum of 50 needs a hundred-sigma Euler step; the rejection
        # cap trips long before that.
        cfg = DiffusionConfig(rejection_cap=2000)
        with pytest.raises(StarvationError):
            diffusion_conditional(cfg, 50.0, Strictness.NONSTRICT, RngStream(6, 0))


class TestWalks:
    def test_only_repeated_merged_value_is_the_atom(self):
        # Left-exit suprema tie at exactly Phi(u0); everything else is
        # continuous, so no other value can repeat across 10^4 walks.
        sampler = DiffusionSampler(DiffusionConfig())
        repeated = set()
        for rep in range(100):
            recs = run_batch(
                sampler, 1.0, WalkMode.NONSTRICT, N=100, seed=7000 + rep
            )
            merged = np.sort(np.concatenate([r.states for r in recs]))
            values, mult = np.unique(merged, return_counts=True)
            repeated.update(float(v) for v, m in zip(values, mult) if m >= 2)
        assert repeated == {INITIAL_SCORE}

    def test_walk_states_start_at_atom_or_above(self):
        # Walks whose first draw already exceeds the level record no states;
        # all others start at or above the initial score.
        sampler = DiffusionSampler(DiffusionConfig())
        recs = run_batch(sampler, 1.0, WalkMode.NONSTRICT, N=50, seed=8)
        for r in recs:
            if r.count:
                assert r.states[0] >= INITIAL_SCORE
