"""Randomized property suite for the expectation calculus.

Instances are small finite ambiguity sets with max-affine test functions, so
every expectation in a check is an exact weighted sum and the axioms must
hold to accumulation error (1e-12), not to statistical tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import AmbiguitySet, Event, FiniteDiscrete, TestFunction
from .expectation import (
    PowerAbs,
    choquet_integral,
    event_upper_capacity,
    lower_expectation,
    upper_expectation,
)

__all__ = [
    "AxiomSuiteReport",
    "PropertyCheck",
    "random_ambiguity_set",
    "random_max_affine",
    "run_axiom_suite",
]

_TOL = 1e-12


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    trials: int
    failures: int
    worst_gap: float

    @property
    def ok(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True)
class AxiomSuiteReport:
    checks: tuple
    trials: int
    seed: int

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def random_ambiguity_set(
    rng: np.random.Generator, dim: int = 1, max_members: int = 5, max_atoms: int = 6
) -> AmbiguitySet:
    members = []
    for _ in range(int(rng.integers(1, max_members + 1))):
        k = int(rng.integers(2, max_atoms + 1))
        while True:
            if dim == 1:
                values = np.round(rng.normal(0.0, 2.0, size=k), 6)
            else:
                values = np.round(rng.normal(0.0, 2.0, size=(k, dim)), 6)
            if len(np.unique(values, axis=0)) == k:
                break
        weights = rng.dirichlet(np.ones(k))
        members.append(FiniteDiscrete.from_arrays(values, weights))
    return AmbiguitySet(tuple(members), label="random")


def random_max_affine(rng: np.random.Generator, dim: int = 1) -> TestFunction:
    """max of <=3 affine pieces; Lipschitz bound is the largest slope norm."""
    pieces = int(rng.integers(1, 4))
    slopes = rng.normal(0.0, 1.5, size=(pieces, dim))
    offsets = rng.normal(0.0, 1.0, size=pieces)

    if dim == 1:
        a = slopes[:, 0]

        def evaluator(x, a=a, b=offsets):
            return float(np.max(a * float(x) + b))

    else:

        def evaluator(x, a=slopes, b=offsets):
            return float(np.max(a @ np.asarray(x, dtype=float) + b))

    lip = float(np.max(np.linalg.norm(slopes, axis=1)))
    return TestFunction(evaluator, lipschitz_bound=lip, name=f"max_affine_{pieces}")


def _combine(f: TestFunction, g: TestFunction, op) -> TestFunction:
    return TestFunction(lambda x: op(f(x), g(x)))


def run_axiom_suite(trials: int = 1000, seed: int = 20240) -> AxiomSuiteReport:
    """Check the defining axioms plus conjugacy, sandwich, invariance and
    Choquet domination on `trials` random instances."""
    rng = np.random.default_rng(seed)
    names = [
        "monotonicity",
        "constant_preserving",
        "subadditivity",
        "positive_homogeneity",
        "conjugacy",
        "sandwich",
        "distributional_invariance",
        "choquet_dominates_mean",
    ]
    failures = dict.fromkeys(names, 0)
    worst = dict.fromkeys(names, 0.0)

    def record(name: str, gap: float) -> None:
        worst[name] = max(worst[name], gap)
        if gap > _TOL:
            failures[name] += 1

    for _ in range(trials):
        amb = random_ambiguity_set(rng)
        f = random_max_affine(rng)
        g = random_max_affine(rng)

        ef = upper_expectation(amb, f)
        eg = upper_expectation(amb, g)

        # (a) monotonicity via f <= max(f, g)
        e_max = upper_expectation(amb, _combine(f, g, max))
        record("monotonicity", ef - e_max)

        # (b) constant preserving
        c = float(rng.normal(0.0, 5.0))
        record("constant_preserving", abs(upper_expectation(amb, TestFunction(lambda x: c)) - c))

        # (c) sub-additivity
        e_sum = upper_expectation(amb, _combine(f, g, lambda u, v: u + v))
        record("subadditivity", e_sum - (ef + eg))

        # (d) positive homogeneity
        lam = float(rng.uniform(0.0, 3.0))
        e_scaled = upper_expectation(amb, TestFunction(lambda x: lam * f(x)))
        record("positive_homogeneity", abs(e_scaled - lam * ef) / max(1.0, lam * abs(ef)))

        # conjugate: lower = -upper(-f) and lower <= upper
        lf = lower_expectation(amb, f)
        neg = upper_expectation(amb, TestFunction(lambda x: -f(x)))
        record("conjugacy", max(abs(lf + neg), lf - ef))

        # sandwich around a half-line event
        a = float(rng.normal(0.0, 2.0))
        w = float(rng.uniform(0.1, 1.0))
        under = TestFunction(lambda x: min(1.0, max(0.0, (float(x) - a) / w)))
        over = TestFunction(lambda x: min(1.0, max(0.0, (float(x) - a) / w + 1.0)))
        cap = event_upper_capacity(amb, Event("ge", a))
        record(
            "sandwich",
            max(upper_expectation(amb, under) - cap, cap - upper_expectation(amb, over)),
        )

        # shuffling members and atom lists changes nothing (atom order is
        # normalized at construction, so equality is exact)
        perm = rng.permutation(len(amb.members))
        shuffled = AmbiguitySet(tuple(amb.members[i] for i in perm), label="shuffled")
        t = float(rng.normal(0.0, 2.0))
        cap_a = event_upper_capacity(amb, Event("ge", t))
        cap_b = event_upper_capacity(shuffled, Event("ge", t))
        ch_a = choquet_integral(amb, PowerAbs(1.0))
        ch_b = choquet_integral(shuffled, PowerAbs(1.0))
        record("distributional_invariance", max(abs(cap_a - cap_b), abs(ch_a - ch_b)))

        # breve mean of |X| (exact for bounded support) <= Choquet integral
        abs_mean = max(m.expectation(abs) for m in amb.members)
        record("choquet_dominates_mean", abs_mean - ch_a)

    checks = tuple(
        PropertyCheck(name=n, trials=trials, failures=failures[n], worst_gap=worst[n])
        for n in names
    )
    return AxiomSuiteReport(checks=checks, trials=trials, seed=seed)
