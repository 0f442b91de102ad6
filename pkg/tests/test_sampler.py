"""Adversarial path sampling: counter-based streams and member schedules.

Determinism is the contract here: a path is a pure function of
(model, strategy, horizon, seed), and shared prefixes of the stream do not
depend on how far the path eventually runs.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subexp import (
    AmbiguitySet,
    BlockSchedule,
    FiniteDiscrete,
    Stationary,
    TwoSidedPareto,
    build_mean_set,
    mixture_for_target,
    oscillation_schedule,
    sample_path,
    stationary_for_target,
    target_chasing_schedule,
)
from subexp.errors import TargetOutOfRange, TargetOutsideM
from conftest import make_e1, make_v2mix


def test_same_args_same_path(e1):
    s = Stationary((0.5, 0.5))
    p1 = sample_path(e1, s, 500, seed=42)
    p2 = sample_path(e1, s, 500, seed=42)
    assert np.array_equal(p1.increments, p2.increments)
    assert np.array_equal(p1.member_indices, p2.member_indices)


def test_prefix_stability(e1):
    """Extending the horizon must not rewrite the earlier steps."""
    s = Stationary((0.3, 0.7))
    short = sample_path(e1, s, 200, seed=9)
    long = sample_path(e1, s, 1000, seed=9)
    assert np.array_equal(long.increments[:200], short.increments)


def test_different_seeds_differ(e1):
    s = Stationary((0.5, 0.5))
    p1 = sample_path(e1, s, 200, seed=1)
    p2 = sample_path(e1, s, 200, seed=2)
    assert not np.array_equal(p1.increments, p2.increments)


def test_path_partial_sums_and_running_means(e1):
    p = sample_path(e1, Stationary((1.0, 0.0)), 100, seed=3)
    assert np.array_equal(p.partial_sums, np.cumsum(p.increments))
    rm = p.running_means()
    assert rm.shape == (100,)
    assert rm[-1] == pytest.approx(p.partial_sums[-1] / 100)


def test_stationary_validation(e1):
    with pytest.raises(ValueError):
        sample_path(e1, Stationary((0.6, 0.6)), 10, seed=0)
    with pytest.raises(ValueError):
        sample_path(e1, Stationary((1.0,)), 10, seed=0)


def test_pure_strategy_uses_one_member(e1):
    p = sample_path(e1, Stationary((0.0, 1.0)), 300, seed=5)
    assert set(p.member_indices.tolist()) == {1}


# --------------------------------------------------------- target strategies


def test_stationary_for_target_mean_is_exact(e1):
    for b in (0.0, 0.125, 0.25, 0.5):
        s = stationary_for_target(e1, b)
        means = e1.member_means()
        assert float(np.dot(s.weights, means)) == pytest.approx(b, abs=1e-15)
    assert stationary_for_target(e1, 0.0).weights == (1.0, 0.0)
    assert stationary_for_target(e1, 0.5).weights == (0.0, 1.0)


def test_stationary_for_target_out_of_range(e1):
    with pytest.raises(TargetOutOfRange):
        stationary_for_target(e1, 0.7)
    with pytest.raises(TargetOutOfRange):
        stationary_for_target(e1, -0.01)


def test_target_attained_empirically(e1):
    b = 0.25
    p = sample_path(e1, stationary_for_target(e1, b), 200_000, seed=11)
    # CLT band: sd <= 1 per step
    assert abs(p.partial_sums[-1] / p.n - b) < 5.0 / np.sqrt(p.n)


def test_mixture_for_target_planar(v2mix):
    w = mixture_for_target(v2mix, [0.25, 0.75])
    assert len(w) == 3
    assert min(w) >= -1e-12
    assert sum(w) == pytest.approx(1.0, abs=1e-9)
    means = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]])
    got = np.asarray(w) @ means
    assert np.allclose(got, [0.25, 0.75], atol=1e-9)


def test_mixture_for_target_outside_hull(v2mix):
    with pytest.raises(TargetOutsideM):
        mixture_for_target(v2mix, [0.8, 0.8])


# ----------------------------------------------------------------- schedules


def test_block_schedule_shapes(e1):
    sched = BlockSchedule((10, 30), ((1.0, 0.0), (0.0, 1.0)))
    blocks = sched.blocks_for(30)
    assert blocks[-1][0] == 30
    p = sample_path(e1, sched, 30, seed=1)
    assert set(p.member_indices[:10].tolist()) == {0}
    assert set(p.member_indices[10:].tolist()) == {1}


def test_block_schedule_extends_last_block(e1):
    sched = BlockSchedule((10, 30), ((1.0, 0.0), (0.0, 1.0)))
    p = sample_path(e1, sched, 50, seed=1)
    assert set(p.member_indices[30:].tolist()) == {1}


def test_block_schedule_validation():
    with pytest.raises(ValueError):
        BlockSchedule((30, 10), ((1.0, 0.0), (0.0, 1.0)))
    with pytest.raises(ValueError):
        BlockSchedule((10, 30), ((1.0, 0.0),))


def test_oscillation_schedule_geometry(e1):
    sched = oscillation_schedule(e1, K=5)
    assert len(sched.ends) == 5
    ratios = [sched.ends[i + 1] / sched.ends[i] for i in range(4)]
    assert all(r == pytest.approx(16.0) for r in ratios)
    # alternates between the two pure extremes
    assert sched.weights_per_block[0] != sched.weights_per_block[1]
    assert sched.weights_per_block[0] == sched.weights_per_block[2]


def test_target_chasing_visits_every_target(v2mix):
    ms = build_mean_set(v2mix, delta=0.05)
    chase = target_chasing_schedule(v2mix, m=5, horizon=100_000, mean_set=ms)
    assert len(chase.targets) == 5
    seen = set(chase.target_index_per_block)
    assert seen == set(range(5))
    assert chase.visit_ends[-1] <= 100_000
    # plan ends strictly increase
    assert all(b > a for a, b in zip(chase.plan.ends, chase.plan.ends[1:]))


def test_target_chasing_interval_targets(e1):
    chase = target_chasing_schedule(e1, m=5, horizon=50_000)
    got = sorted(float(t) for t in np.asarray(chase.targets).ravel())
    assert got == pytest.approx([0.0, 0.125, 0.25, 0.375, 0.5])


# ------------------------------------------------------ stream statistics


def test_pareto_member_sampling_matches_tail():
    amb = AmbiguitySet((TwoSidedPareto(1.5, 1.0, 0.5),), label="p15")
    p = sample_path(amb, Stationary((1.0,)), 200_000, seed=17)
    frac = float(np.mean(np.abs(p.increments) >= 2.0))
    expect = 2.0 ** -1.5
    assert abs(frac - expect) < 0.01
    assert np.min(np.abs(p.increments)) >= 1.0  # no mass inside the scale


@given(st.integers(0, 2**63), st.integers(1, 64))
@settings(max_examples=40, deadline=None)
def test_sampled_values_are_legal_atoms(seed, n):
    amb = make_e1()
    p = sample_path(amb, Stationary((0.5, 0.5)), n, seed=seed)
    assert set(np.unique(p.increments).tolist()) <= {-1.0, 1.0}
    assert p.n == n and len(p.increments) == n
