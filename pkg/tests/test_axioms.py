"""Randomized property suite over generated ambiguity sets."""

import numpy as np

from subexp import random_ambiguity_set, random_max_affine, run_axiom_suite


def test_suite_passes_at_tight_tolerance():
    report = run_axiom_suite(trials=200, seed=123)
    assert report.ok
    assert report.trials == 200
    names = [c.name for c in report.checks]
    assert names == [
        "monotonicity",
        "constant_preserving",
        "subadditivity",
        "positive_homogeneity",
        "conjugacy",
        "sandwich",
        "distributional_invariance",
        "choquet_dominates_mean",
    ]
    for check in report.checks:
        assert check.failures == 0
        assert check.worst_gap <= 1e-12
        assert check.trials == 200


def test_suite_is_deterministic():
    a = run_axiom_suite(trials=50, seed=7)
    b = run_axiom_suite(trials=50, seed=7)
    assert [(c.name, c.worst_gap) for c in a.checks] == [(c.name, c.worst_gap) for c in b.checks]


def test_random_generators_produce_valid_objects():
    rng = np.random.default_rng(99)
    for _ in range(50):
        amb = random_ambiguity_set(rng)
        assert 1 <= len(amb.members) <= 5
        for m in amb.members:
            assert abs(float(np.sum(m.weights)) - 1.0) < 1e-9
        f = random_max_affine(rng, amb.dim)
        x = rng.normal(size=amb.dim) if amb.dim > 1 else float(rng.normal())
        assert np.isfinite(f(x))


def test_vector_sets_supported():
    rng = np.random.default_rng(5)
    amb = random_ambiguity_set(rng, dim=2)
    assert amb.dim == 2
    assert amb.member_means().shape == (len(amb.members), 2)
