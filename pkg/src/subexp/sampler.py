"""Adversarial path sampling: strategies pick a member mixture per step or
per block, then increments are drawn by inverse CDF.

Randomness is counter-based: the two uniforms consumed by step t are pure
64-bit hashes of (seed, 2t) and (seed, 2t+1), so any slice of a path can be
regenerated independently of iteration order and across processes. No global
or sequential RNG state exists anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import AmbiguitySet
from .errors import TargetOutOfRange, TargetOutsideM
from .meanset import MeanSet, build_mean_set, distance_to_mean_set

__all__ = [
    "BlockSchedule",
    "Path",
    "Stationary",
    "TargetChasing",
    "mixture_for_target",
    "oscillation_schedule",
    "sample_path",
    "stationary_for_target",
    "target_chasing_schedule",
]

_WEIGHT_TOL = 1e-12
_RESIDUAL_TOL = 1e-9

# splitmix64 finalizer constants.
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """Hash (seed, counter) pairs to uniforms in [0, 1); 53-bit resolution."""
    z = (np.uint64(seed & _MASK64) + (counters.astype(np.uint64) + np.uint64(1)) * _GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def _check_weights(weights, k: int) -> tuple:
    w = tuple(float(x) for x in weights)
    if len(w) != k:
        raise ValueError(f"mixture needs one weight per member ({k}), got {len(w)}")
    if any(x < 0 for x in w):
        raise ValueError("mixture weights must be nonnegative")
    if abs(math.fsum(w) - 1.0) > _WEIGHT_TOL:
        raise ValueError(f"mixture weights must sum to 1 within {_WEIGHT_TOL}")
    return w


@dataclass(frozen=True)
class Stationary:
    """One member mixture applied at every step."""

    weights: tuple
    label: str = "stationary"

    def blocks_for(self, n: int) -> list[tuple[int, tuple]]:
        return [(n, self.weights)]


@dataclass(frozen=True)
class BlockSchedule:
    """Piecewise-stationary mixture: weights_per_block[j] applies on steps
    (ends[j-1], ends[j]]. Steps beyond the last end reuse the final mixture.
    """

    ends: tuple
    weights_per_block: tuple
    label: str = "blocks"

    def __post_init__(self) -> None:
        if len(self.ends) != len(self.weights_per_block):
            raise ValueError("one mixture per block required")
        if any(b <= a for a, b in zip((0,) + self.ends[:-1], self.ends)):
            raise ValueError(f"block ends must be strictly increasing, got {self.ends}")

    def blocks_for(self, n: int) -> list[tuple[int, tuple]]:
        out = []
        for end, w in zip(self.ends, self.weights_per_block):
            out.append((min(end, n), w))
            if end >= n:
                break
        if out[-1][0] < n:
            out.append((n, self.weights_per_block[-1]))
        return [(e, w) for e, w in out if e > 0]


@dataclass(frozen=True)
class TargetChasing:
    """Block schedule that chases a list of mean targets cyclically.

    visit_ends are the block ends where the running mean is expected to sit
    near the block's target; cluster-set experiments read them off directly.
    """

    targets: tuple
    plan: BlockSchedule
    target_index_per_block: tuple
    label: str = "target_chasing"

    @property
    def visit_ends(self) -> tuple:
        return self.plan.ends

    def blocks_for(self, n: int) -> list[tuple[int, tuple]]:
        return self.plan.blocks_for(n)


Strategy = Stationary | BlockSchedule | TargetChasing


@dataclass
class Path:
    """Sampled increment sequence with exact running sums."""

    n: int
    increments: np.ndarray  # (n,) or (n, d)
    seed: int
    strategy_label: str
    member_indices: np.ndarray  # (n,) int16
    _partial_sums: np.ndarray | None = field(default=None, repr=False)

    @property
    def partial_sums(self) -> np.ndarray:
        """S_m for m = 1..n; S_m = S_{m-1} + increment_m exactly (running sum)."""
        if self._partial_sums is None:
            self._partial_sums = np.cumsum(self.increments, axis=0)
        return self._partial_sums

    def running_means(self) -> np.ndarray:
        """S_m / m for m = 1..n."""
        counts = np.arange(1, self.n + 1, dtype=float)
        sums = self.partial_sums
        return sums / (counts[:, None] if sums.ndim == 2 else counts)


def _extreme_member_indices(amb: AmbiguitySet) -> tuple[int, int]:
    """(argmax, argmin) of member means; 1-d models, first index on ties."""
    means = amb.member_means()
    return int(np.argmax(means)), int(np.argmin(means))


def _pure(k: int, idx: int) -> tuple:
    w = [0.0] * k
    w[idx] = 1.0
    return tuple(w)


def stationary_for_target(amb: AmbiguitySet, b: float) -> Stationary:
    """Mixture of the extreme-mean members whose long-run mean is b.

    alpha = (b - lower)/(upper - lower) weights the max-mean member against
    the min-mean member; a degenerate interval returns the single maximizer.
    Raises TargetOutOfRange when b lies outside [lower, upper].
    """
    if amb.dim != 1:
        raise ValueError("stationary_for_target is defined for dimension 1")
    hi, lo = _extreme_member_indices(amb)
    means = amb.member_means()
    upper, lower = float(means[hi]), float(means[lo])
    if not (lower - _WEIGHT_TOL <= b <= upper + _WEIGHT_TOL):
        raise TargetOutOfRange(f"target {b} outside mean interval [{lower}, {upper}]")
    k = len(amb.members)
    if upper == lower:
        return Stationary(_pure(k, hi), label=f"target={b:g}")
    alpha = min(1.0, max(0.0, (b - lower) / (upper - lower)))
    w = [0.0] * k
    w[hi] += alpha
    w[lo] += 1.0 - alpha
    return Stationary(tuple(w), label=f"target={b:g}")


def mixture_for_target(amb: AmbiguitySet, b) -> tuple:
    """Member weights whose mean vector equals b.

    Solved as a nonnegative least-squares problem over member means with an
    appended sum-to-one row; a residual above 1e-9 means b is not in the
    convex hull of member means and raises TargetOutsideM.
    """
    b = np.atleast_1d(np.asarray(b, dtype=float))
    means = np.atleast_2d(amb.member_means().reshape(len(amb.members), -1))
    if b.shape != (means.shape[1],):
        raise ValueError(f"target has shape {b.shape}, expected ({means.shape[1]},)")

    from scipy.optimize import nnls

    penalty = 100.0 * max(1.0, float(np.abs(means).max()))
    a_mat = np.vstack([means.T, penalty * np.ones((1, len(amb.members)))])
    rhs = np.concatenate([b, [penalty]])
    w, _ = nnls(a_mat, rhs)
    total = w.sum()
    if total <= 0:
        raise TargetOutsideM(f"target {b.tolist()} not attainable")
    w = w / total
    residual = float(np.linalg.norm(means.T @ w - b))
    if residual > _RESIDUAL_TOL:
        raise TargetOutsideM(
            f"target {b.tolist()} outside the mean set (residual {residual:.2e})"
        )
    return tuple(float(x) for x in w)


def oscillation_schedule(
    amb: AmbiguitySet,
    K: int,
    factor: float = 16.0,
    start: int = 16,
) -> BlockSchedule:
    """Alternating pure max-mean / min-mean blocks with geometric ends.

    Block k covers (end_{k-1}, end_k] with end_k = start * factor^(k-1); the
    first block plays the max-mean member. The ratio end_{k-1}/end_k = 1/factor
    controls how close the running mean gets to the extreme means: the
    oscillation reaches within roughly (upper-lower)/factor of each endpoint,
    so a large factor is needed for endpoint attainment at finite n.
    """
    if K < 2:
        raise ValueError("need at least 2 blocks")
    if factor <= 1.0:
        raise ValueError("factor must exceed 1")
    hi, lo = _extreme_member_indices(amb)
    k = len(amb.members)
    ends = []
    for j in range(K):
        end = int(round(start * factor ** j))
        ends.append(max(end, (ends[-1] + 1) if ends else 1))
    weights = tuple(_pure(k, hi) if j % 2 == 0 else _pure(k, lo) for j in range(K))
    return BlockSchedule(tuple(ends), weights, label="oscillation")


def default_targets(amb: AmbiguitySet, m: int, mean_set: MeanSet | None = None) -> np.ndarray:
    """m target means inside the mean set.

    1-d: uniform grid on [lower, upper]. Higher d: simplex-lattice convex
    combinations of member means, thinned to m spread-out points by farthest
    point sampling, then ordered along their principal axis so consecutive
    targets are near each other (which is what the chasing schedule wants).
    """
    if m < 1:
        raise ValueError("need at least one target")
    means = np.atleast_2d(amb.member_means().reshape(len(amb.members), -1))
    if amb.dim == 1:
        lo, hi = float(means.min()), float(means.max())
        return np.linspace(lo, hi, m)

    if mean_set is None:
        mean_set = build_mean_set(amb, delta=0.05)
    grid = _simplex_lattice(len(amb.members), resolution=max(8, m))
    candidates = np.unique(np.round(grid @ means, 12), axis=0)
    chosen = _farthest_point_subset(candidates, m)
    centered = chosen - chosen.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    order = np.argsort(centered @ vt[0])
    chosen = chosen[order]
    tol = 10.0 * mean_set.net.delta
    for t in chosen:
        if distance_to_mean_set(mean_set, t) > tol:
            raise TargetOutsideM(f"generated target {t.tolist()} fails the membership check")
    return chosen


def _simplex_lattice(k: int, resolution: int) -> np.ndarray:
    """All weight vectors with entries i/resolution summing to 1."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + [remaining])
            return
        for i in range(remaining + 1):
            rec(prefix + [i], remaining - i, slots - 1)

    rec([], resolution, k)
    return np.asarray(out, dtype=float) / resolution


def _farthest_point_subset(points: np.ndarray, m: int) -> np.ndarray:
    if len(points) <= m:
        return points
    # Start from the lexicographically smallest point for determinism.
    start = int(np.lexsort(points.T[::-1])[0])
    chosen = [start]
    dist = np.linalg.norm(points - points[start], axis=1)
    while len(chosen) < m:
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.linalg.norm(points - points[nxt], axis=1))
    return points[sorted(chosen)]


def target_chasing_schedule(
    amb: AmbiguitySet,
    m: int,
    horizon: int,
    mean_set: MeanSet | None = None,
    targets: Sequence | None = None,
    start: int = 1000,
    laps: int = 1,
) -> TargetChasing:
    """Cyclic target-chasing plan fitted to a finite horizon.

    Targets are visited in order, one per block, cycling laps times; block
    ends grow geometrically from `start` to `horizon`, so each visit's error
    contracts to about (adjacent target spacing)/(growth factor - 1) plus CLT
    noise. In the infinite extension the cycle continues with the same factor,
    so every target index recurs infinitely often.
    """
    if horizon <= 2 * start:
        raise ValueError(f"horizon {horizon} too small for start {start}")
    if laps < 1:
        raise ValueError("laps must be >= 1")
    if targets is None:
        targets = default_targets(amb, m, mean_set)
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    if targets.ndim == 1 and amb.dim > 1:
        raise ValueError("vector model needs vector targets")
    m = len(targets)

    blocks = laps * m
    ends = []
    if blocks == 1:
        ends = [horizon]
    else:
        ratio = (horizon / start) ** (1.0 / (blocks - 1))
        for j in range(blocks):
            end = int(round(start * ratio ** j))
            ends.append(max(end, (ends[-1] + 1) if ends else 1))
        ends[-1] = horizon

    weights = []
    indices = []
    for j in range(blocks):
        idx = j % m
        b = targets[idx] if targets.ndim > 1 else float(targets[idx])
        if amb.dim == 1:
            weights.append(stationary_for_target(amb, b).weights)
        else:
            weights.append(mixture_for_target(amb, b))
        indices.append(idx)

    plan = BlockSchedule(tuple(ends), tuple(weights), label="target_chasing")
    return TargetChasing(
        targets=tuple(map(tuple, targets)) if targets.ndim > 1 else tuple(targets.tolist()),
        plan=plan,
        target_index_per_block=tuple(indices),
    )


def sample_path(amb: AmbiguitySet, strategy: Strategy, n: int, seed: int) -> Path:
    """Draw n increments under the strategy's per-block mixtures.

    Step t consumes exactly the uniforms hashed from counters (2t, 2t+1):
    one to select the member, one for the member's inverse CDF. The result is
    a pure function of (set, strategy, n, seed).
    """
    if n < 1:
        raise ValueError("need at least one step")
    members = amb.members
    k = len(members)
    if amb.dim == 1:
        increments = np.empty(n, dtype=float)
    else:
        increments = np.empty((n, amb.dim), dtype=float)
    member_idx = np.empty(n, dtype=np.int16)

    prev_end = 0
    for end, weights in strategy.blocks_for(n):
        weights = _check_weights(weights, k)
        steps = np.arange(prev_end, end, dtype=np.uint64)
        u_member = _uniforms(seed, 2 * steps)
        u_value = _uniforms(seed, 2 * steps + np.uint64(1))
        cumw = np.cumsum(weights)
        cumw[-1] = 1.0
        idx = np.minimum(np.searchsorted(cumw, u_member, side="right"), k - 1)
        member_idx[prev_end:end] = idx
        for j, member in enumerate(members):
            mask = idx == j
            if mask.any():
                increments[prev_end:end][mask] = member.icdf(u_value[mask])
        prev_end = end

    return Path(
        n=n,
        increments=increments,
        seed=seed,
        strategy_label=strategy.label,
        member_indices=member_idx,
    )
