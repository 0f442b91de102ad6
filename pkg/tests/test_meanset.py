"""Support-function geometry of the attainable-mean set.

The planar model's mean hull is the segment from (1,0) to (0,1), which has
a two-line exact distance formula; that makes it the oracle for the net
approximation ("net value never exceeds the true distance, and undershoots
by at most O(delta)").
"""

import math

import numpy as np
import pytest

from subexp import (
    AmbiguitySet,
    FiniteDiscrete,
    TwoSidedPareto,
    build_direction_net,
    build_mean_set,
    contains,
    distance_to_mean_set,
    support_function,
)
from subexp.errors import DimensionTooLarge, NotConvergent


def segment_distance(y):
    """Exact distance from y to the segment (1,0)-(0,1)."""
    a, b = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    t = np.clip(np.dot(y - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
    return float(np.linalg.norm(y - (a + t * (b - a))))


# ------------------------------------------------------------- direction nets


def test_net_dimension_one_is_exact():
    net = build_direction_net(1, 0.3)
    assert sorted(net.directions.ravel().tolist()) == [-1.0, 1.0]
    assert len(net) == 2


def test_net_rows_are_unit_and_mesh_holds():
    net = build_direction_net(2, 0.1)
    norms = np.linalg.norm(net.directions, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-12)
    rng = np.random.default_rng(7)
    for _ in range(500):
        v = rng.normal(size=2)
        v /= np.linalg.norm(v)
        gap = np.min(np.linalg.norm(net.directions - v, axis=1))
        assert gap <= net.delta + 1e-12


def test_net_mesh_three_and_four_dimensional():
    for dim in (3, 4):
        net = build_direction_net(dim, 0.4)
        norms = np.linalg.norm(net.directions, axis=1)
        assert np.allclose(norms, 1.0, atol=1e-12)
        rng = np.random.default_rng(dim)
        worst = 0.0
        for _ in range(300):
            v = rng.normal(size=dim)
            v /= np.linalg.norm(v)
            worst = max(worst, float(np.min(np.linalg.norm(net.directions - v, axis=1))))
        assert worst <= net.delta + 1e-12


def test_net_caps_and_validation():
    with pytest.raises(DimensionTooLarge):
        build_direction_net(5, 0.1)
    with pytest.raises(ValueError):
        build_direction_net(2, 0.0)
    with pytest.raises(ValueError):
        build_direction_net(0, 0.1)


# ---------------------------------------------------------- support function


def test_support_function_interval(e1):
    assert support_function(e1, [1.0]) == 0.5
    assert support_function(e1, [-1.0]) == 0.0
    # positive homogeneity in the direction argument
    assert support_function(e1, [2.0]) == 1.0


def test_support_function_planar(v2mix):
    assert support_function(v2mix, [1.0, 0.0]) == 1.0
    assert support_function(v2mix, [0.0, 1.0]) == 1.0
    s = 1.0 / math.sqrt(2.0)
    assert support_function(v2mix, [s, s]) == pytest.approx(s)
    assert support_function(v2mix, [-s, -s]) == pytest.approx(-s)


def test_support_function_shape_check(v2mix):
    with pytest.raises(ValueError):
        support_function(v2mix, [1.0])


def test_support_function_pareto_tail_raises():
    amb = AmbiguitySet((TwoSidedPareto(0.9, 1.0, 0.5),), label="p09")
    with pytest.raises(NotConvergent):
        support_function(amb, [1.0])


# -------------------------------------------------------------- mean sets


def test_interval_mean_set_exact(e1):
    ms = build_mean_set(e1, delta=0.05)
    assert ms.lower == 0.0
    assert ms.upper == 0.5
    # dimension-1 nets carry both unit directions, so distances are exact
    assert distance_to_mean_set(ms, [0.25]) == 0.0
    assert distance_to_mean_set(ms, [0.75]) == pytest.approx(0.25, abs=1e-15)
    assert distance_to_mean_set(ms, [-1.0]) == pytest.approx(1.0, abs=1e-15)
    assert contains(ms, [0.5])
    assert not contains(ms, [2.0], tol=1e-9)


def test_planar_endpoints_reject_interval_api(v2mix):
    ms = build_mean_set(v2mix, delta=0.1)
    with pytest.raises(ValueError):
        _ = ms.lower


def test_planar_membership(v2mix):
    ms = build_mean_set(v2mix, delta=0.05)
    for y in ([1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.3, 0.7]):
        assert contains(ms, y)
        assert distance_to_mean_set(ms, y) <= 1e-9
    assert not contains(ms, [1.0, 1.0], tol=0.1)


def test_planar_distance_probes_are_one_sided(v2mix):
    """10^4 random probes: net distance in [true - 5*delta, true]."""
    delta = 0.05
    ms = build_mean_set(v2mix, delta=delta)
    rng = np.random.default_rng(20240)
    ys = rng.uniform(-1.0, 2.0, size=(10_000, 2))
    for y in ys:
        net_d = distance_to_mean_set(ms, y)
        true_d = segment_distance(y)
        assert net_d <= true_d + 1e-9
        assert net_d >= true_d - 5.0 * delta


def test_finer_net_tightens_distance(v2mix):
    y = [1.3, 1.3]
    true_d = segment_distance(np.array(y))
    coarse = distance_to_mean_set(build_mean_set(v2mix, delta=0.3), y)
    fine = distance_to_mean_set(build_mean_set(v2mix, delta=0.01), y)
    assert coarse <= fine <= true_d
    assert fine == pytest.approx(true_d, abs=0.01 * 5)


def test_distance_input_validation(v2mix):
    ms = build_mean_set(v2mix, delta=0.1)
    with pytest.raises(ValueError):
        distance_to_mean_set(ms, [0.0])
    with pytest.raises(ValueError):
        distance_to_mean_set(ms, [math.nan, 0.0])
