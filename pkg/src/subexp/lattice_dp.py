"""Exact values of path functionals under adaptive member choice.

For finite-support scalar members whose atoms share a common lattice, the
upper (or lower) value of a path functional over all adaptive strategies is
computed by backward induction on the partial sum. Sums after k steps live on
the integer window [k*amin, k*amax] of the lattice, so each level is a dense
array and transitions are shifted slices, one per atom.

`brute_force_value` re-derives the same number by recursing over full outcome
histories with no state compression; it is the oracle the DP is tested
against, and deliberately knows nothing about lattices or Markov structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .distributions import AmbiguitySet, Event, FiniteDiscrete
from .errors import NonLattice, StateSpaceTooLarge, TooLargeForBruteForce

__all__ = [
    "AllBlocksHit",
    "LatticeModel",
    "RunningMax",
    "TerminalEvent",
    "TerminalSum",
    "brute_force_value",
    "dp_value",
    "lattice_model",
    "policy_enumeration_value",
]

_MAX_WIDTH = 10_000_000
_MAX_DENOMINATOR = 1_000_000
_LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class LatticeModel:
    """Members rewritten as integer atom offsets on a shared pitch."""

    pitch: float
    offsets: tuple  # per member: tuple of ints
    weights: tuple  # per member: tuple of floats
    amin: int
    amax: int

    @property
    def span(self) -> int:
        return self.amax - self.amin


def lattice_model(amb: AmbiguitySet) -> LatticeModel:
    """Find the coarsest pitch h with every atom an integer multiple of h.

    Raises NonLattice for continuous members or atoms that are not within
    1e-9 of a rational with denominator <= 1e6 (scaled by the pitch).
    """
    if amb.dim != 1:
        raise ValueError("lattice models are one-dimensional")
    if not amb.is_finite_support:
        raise NonLattice("continuous members do not live on a lattice")

    fractions = []
    for member in amb.members:
        for v in np.asarray(member.values, dtype=float).ravel():
            if v != 0.0:
                f = Fraction(v).limit_denominator(_MAX_DENOMINATOR)
                if abs(float(f) - v) > _LATTICE_TOL:
                    raise NonLattice(f"atom {v!r} is not close to a small rational")
                fractions.append(f)
    if not fractions:
        pitch = Fraction(1)
    else:
        num = 0
        den = 1
        for f in fractions:
            num = math.gcd(num, abs(f.numerator))
            den = den * f.denominator // math.gcd(den, f.denominator)
        pitch = Fraction(num, den)
    h = float(pitch)

    offsets = []
    weights = []
    amin = 0
    amax = 0
    for member in amb.members:
        offs = []
        for v in np.asarray(member.values, dtype=float).ravel():
            a = int(round(v / h)) if v != 0.0 else 0
            if abs(a * h - v) > _LATTICE_TOL:
                raise NonLattice(f"atom {v!r} is off the pitch {h!r} lattice")
            offs.append(a)
        offsets.append(tuple(offs))
        weights.append(tuple(float(w) for w in member.weights))
        amin = min(amin, min(offs))
        amax = max(amax, max(offs))
    return LatticeModel(h, tuple(offsets), tuple(weights), amin, amax)


@dataclass(frozen=True)
class TerminalSum:
    """Value f(S_n); f must accept an ndarray of sums."""

    f: Callable
    name: str = "terminal_sum"

    def terminal(self, sums: np.ndarray) -> np.ndarray:
        return np.asarray(self.f(sums), dtype=float)

    def history_value(self, history: tuple) -> float:
        return float(self.terminal(np.asarray([math.fsum(history)]))[0])


@dataclass(frozen=True)
class TerminalEvent:
    """Indicator of an event on S_n."""

    event: Event

    def terminal(self, sums: np.ndarray) -> np.ndarray:
        return self.event.holds(sums).astype(float)

    def history_value(self, history: tuple) -> float:
        return 1.0 if bool(self.event.holds(math.fsum(history))) else 0.0


@dataclass(frozen=True)
class RunningMax:
    """Indicator that g(S_k) crosses a threshold at some step k = 1..n.

    mode "pos" uses g = identity (one-sided crossing), "abs" uses g = |.|.
    thresholds is a scalar or a per-step sequence (index k-1 for step k);
    strict picks > instead of >=. Per-step thresholds express events like
    max_k (|S_k| - b_k) > x as |S_k| > x + b_k.
    """

    thresholds: float | tuple
    mode: str = "abs"
    strict: bool = False

    def __post_init__(self) -> None:
        if self.mode not in ("abs", "pos"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not np.isscalar(self.thresholds):
            object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))

    def _threshold_at(self, k: int, n: int) -> float:
        if np.isscalar(self.thresholds):
            return float(self.thresholds)
        if len(self.thresholds) != n:
            raise ValueError(f"{len(self.thresholds)} thresholds for horizon {n}")
        return self.thresholds[k - 1]

    def hit(self, k: int, n: int, sums: np.ndarray) -> np.ndarray:
        g = np.abs(sums) if self.mode == "abs" else sums
        t = self._threshold_at(k, n)
        return g > t if self.strict else g >= t

    def history_value(self, history: tuple) -> float:
        n = len(history)
        running = 0.0
        for k in range(1, n + 1):
            running = math.fsum(history[:k])
            if bool(self.hit(k, n, np.asarray([running]))[0]):
                return 1.0
        return 0.0


@dataclass(frozen=True)
class AllBlocksHit:
    """Indicator that every block's sum increment satisfies its event.

    Block j covers steps (ends[j-1], ends[j]] and its event applies to
    S_{ends[j]} - S_{ends[j-1]}. The last end must equal the horizon.
    """

    ends: tuple
    events: tuple

    def __post_init__(self) -> None:
        if len(self.ends) != len(self.events):
            raise ValueError("one event per block required")
        if any(b <= a for a, b in zip((0,) + tuple(self.ends[:-1]), self.ends)):
            raise ValueError("block ends must be strictly increasing")

    def history_value(self, history: tuple) -> float:
        if self.ends[-1] != len(history):
            raise ValueError("last block end must equal the horizon")
        prev = 0
        for end, event in zip(self.ends, self.events):
            inc = math.fsum(history[prev:end])
            if not bool(event.holds(inc)):
                return 0.0
            prev = end
        return 1.0


Functional = TerminalSum | TerminalEvent | RunningMax | AllBlocksHit


def _check_side(side: str) -> Callable:
    if side == "upper":
        return np.maximum
    if side == "lower":
        return np.minimum
    raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")


def _backward_pass(
    model: LatticeModel,
    n: int,
    terminal: np.ndarray,
    side: str,
    running: RunningMax | None = None,
) -> float:
    opt = _check_side(side)
    span = model.span
    if n * span + 1 > _MAX_WIDTH:
        raise StateSpaceTooLarge(f"{n * span + 1} lattice states at the horizon")

    v = terminal
    for k in range(n - 1, -1, -1):
        width = k * span + 1
        acc = None
        for offs, wts in zip(model.offsets, model.weights):
            member_val = np.zeros(width)
            for a, w in zip(offs, wts):
                shift = a - model.amin
                member_val += w * v[shift : shift + width]
            acc = member_val if acc is None else opt(acc, member_val)
        v = acc
        if running is not None and k >= 1:
            sums = (k * model.amin + np.arange(width)) * model.pitch
            v = np.where(running.hit(k, n, sums), 1.0, v)
    return float(v[0])


def dp_value(amb: AmbiguitySet, functional: Functional, n: int, side: str = "upper") -> float:
    """Exact optimal value of the functional over adaptive member choice.

    side "upper" maximizes at every step (upper expectation of the
    functional), "lower" minimizes. Requires scalar finite-support members on
    a common lattice and at most 1e7 terminal states.
    """
    if n < 1:
        raise ValueError("need at least one step")
    model = lattice_model(amb)
    span = model.span
    width_n = n * span + 1
    if width_n > _MAX_WIDTH:
        raise StateSpaceTooLarge(f"{width_n} lattice states at the horizon")
    sums_n = (n * model.amin + np.arange(width_n)) * model.pitch

    if isinstance(functional, (TerminalSum, TerminalEvent)):
        return _backward_pass(model, n, functional.terminal(sums_n), side)

    if isinstance(functional, RunningMax):
        terminal = functional.hit(n, n, sums_n).astype(float)
        return _backward_pass(model, n, terminal, side, running=functional)

    if isinstance(functional, AllBlocksHit):
        if functional.ends[-1] != n:
            raise ValueError("last block end must equal the horizon")
        # Block events depend only on the block's own increment, so the value
        # at a block boundary is a constant and the blocks decouple into a
        # product of independent one-block problems.
        value = 1.0
        prev = 0
        for end, event in zip(functional.ends, functional.events):
            length = end - prev
            w = length * span + 1
            sums = (length * model.amin + np.arange(w)) * model.pitch
            value *= _backward_pass(model, length, event.holds(sums).astype(float), side)
            prev = end
        return value

    raise TypeError(f"unsupported functional {type(functional).__name__}")


_BF_MAX_STEPS = 4
_BF_MAX_MEMBERS = 3
_BF_MAX_ATOMS = 3


def brute_force_value(
    amb: AmbiguitySet, functional: Functional, n: int, side: str = "upper"
) -> float:
    """Optimal value by recursion over full outcome histories.

    The member chosen at each node may depend on the entire history, not just
    the current sum, so this certifies that state compression in dp_value
    loses nothing. Sizes are capped hard because the tree has
    (atoms)^n leaves.
    """
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    if amb.dim != 1 or not amb.is_finite_support:
        raise ValueError("brute force needs scalar finite-support members")
    if n > _BF_MAX_STEPS:
        raise TooLargeForBruteForce(f"{n} steps exceeds the cap of {_BF_MAX_STEPS}")
    if len(amb.members) > _BF_MAX_MEMBERS:
        raise TooLargeForBruteForce("too many members")
    if any(len(m.weights) > _BF_MAX_ATOMS for m in amb.members):
        raise TooLargeForBruteForce("too many atoms per member")

    pick = max if side == "upper" else min
    atoms = [
        (tuple(float(v) for v in np.asarray(m.values).ravel()), tuple(m.weights))
        for m in amb.members
    ]

    def rec(history: tuple) -> float:
        if len(history) == n:
            return functional.history_value(history)
        candidates = []
        for values, weights in atoms:
            candidates.append(
                math.fsum(w * rec(history + (v,)) for v, w in zip(values, weights))
            )
        return pick(candidates)

    return rec(())


def policy_enumeration_value(
    amb: AmbiguitySet, functional: Functional, n: int, side: str = "upper"
) -> float:
    """Optimal value by enumerating every deterministic history-feedback policy.

    A policy assigns a member to each history prefix; its value is the plain
    expectation of the functional under the induced law. This is the most
    literal reading of 'optimize over strategies' and is only feasible for
    n <= 2, where it cross-checks brute_force_value's max-commutes recursion.
    """
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be 'upper' or 'lower', got {side!r}")
    if n > 2:
        raise TooLargeForBruteForce("policy tables explode beyond 2 steps")
    if amb.dim != 1 or not amb.is_finite_support:
        raise ValueError("policy enumeration needs scalar finite-support members")

    from itertools import product

    atoms = [
        (tuple(float(v) for v in np.asarray(m.values).ravel()), tuple(m.weights))
        for m in amb.members
    ]
    k = len(atoms)

    # Histories reachable before each step, in a fixed order.
    prefixes: list[tuple] = [()]
    all_values = sorted({v for vals, _ in atoms for v in vals})
    for step in range(1, n):
        prefixes.extend(p for p in product(all_values, repeat=step))

    best = None
    for assignment in product(range(k), repeat=len(prefixes)):
        table = dict(zip(prefixes, assignment))

        def walk(history: tuple, prob: float) -> float:
            if len(history) == n:
                return prob * functional.history_value(history)
            values, weights = atoms[table[history]]
            return math.fsum(
                walk(history + (v,), prob * w) for v, w in zip(values, weights)
            )

        value = walk((), 1.0)
        if best is None:
            best = value
        else:
            best = max(best, value) if side == "upper" else min(best, value)
    return best
