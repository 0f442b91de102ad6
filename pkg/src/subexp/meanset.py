"""Mean sets via support functions on finite direction nets.

For a finite ambiguity set the attainable long-run mean vectors form the
convex hull of the member means, so the support function in direction p is
simply the max of <p, member mean>. The set is represented purely by support
values on a direction net; distance and membership queries follow from
support-function duality, with a documented O(delta) net error for points
outside the set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import AmbiguitySet
from .errors import DimensionTooLarge

__all__ = [
    "DirectionNet",
    "MeanSet",
    "build_direction_net",
    "build_mean_set",
    "contains",
    "distance_to_mean_set",
    "support_function",
]

_NET_CAP = 100_000
_MAX_DIM = 4


@dataclass(frozen=True)
class DirectionNet:
    """Finite set of unit directions with mesh parameter delta."""

    dimension: int
    delta: float
    directions: np.ndarray  # shape (K, dimension), unit rows

    def __len__(self) -> int:
        return len(self.directions)


def build_direction_net(dimension: int, delta: float) -> DirectionNet:
    """Unit-sphere net: exact {+1,-1} in 1-d, uniform angles in 2-d,
    spiral/low-discrepancy points in 3-d and 4-d. Dimension capped at 4.
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    if dimension > _MAX_DIM:
        raise DimensionTooLarge(f"direction nets capped at dimension {_MAX_DIM}, got {dimension}")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")

    if dimension == 1:
        dirs = np.array([[1.0], [-1.0]])
    elif dimension == 2:
        count = int(math.ceil(2.0 * math.pi / delta))
        angles = 2.0 * math.pi * np.arange(count) / count
        dirs = np.column_stack([np.cos(angles), np.sin(angles)])
    else:
        count = min(int(math.ceil((4.0 / delta) ** (dimension - 1))), _NET_CAP)
        dirs = _sphere_points(dimension, count)
    return DirectionNet(dimension=dimension, delta=delta, directions=dirs)


def _sphere_points(dimension: int, count: int) -> np.ndarray:
    if dimension == 3:
        # Fibonacci spiral: near-uniform covering of the 2-sphere.
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        i = np.arange(count)
        z = 1.0 - 2.0 * (i + 0.5) / count
        theta = 2.0 * math.pi * i / golden
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])
    # d = 4: deterministic low-discrepancy points pushed through the
    # Gaussian map and normalized; covering verified by probing in tests.
    from scipy.special import ndtri
    from scipy.stats.qmc import Halton

    u = Halton(d=dimension, scramble=False).random(count + 1)[1:]  # drop the origin point
    g = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return g / norms


@dataclass(frozen=True)
class MeanSet:
    """Support-value representation of the attainable-mean set."""

    dimension: int
    net: DirectionNet
    support_values: np.ndarray  # g(p) per net direction
    label: str = ""

    @property
    def lower(self) -> float:
        """Left endpoint in dimension 1."""
        self._require_dim1()
        return -self._value_at([-1.0])

    @property
    def upper(self) -> float:
        """Right endpoint in dimension 1."""
        self._require_dim1()
        return self._value_at([1.0])

    def _value_at(self, direction) -> float:
        d = np.asarray(direction, dtype=float)
        idx = int(np.argmax(self.net.directions @ d))
        return float(self.support_values[idx])

    def _require_dim1(self) -> None:
        if self.dimension != 1:
            raise ValueError("interval endpoints defined for dimension 1 only")


def support_function(amb: AmbiguitySet, p) -> float:
    """g(p): the limiting upper mean of <p, X>, exact for finite sets.

    Positively homogeneous in p (p need not be a unit vector). For Pareto
    members the projected mean is the closed-form signed mean; NotConvergent
    propagates when the tail exponent is <= 1.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.shape != (amb.dim,):
        raise ValueError(f"direction has shape {p.shape}, expected ({amb.dim},)")
    best = -math.inf
    for m in amb.members:
        mu = m.mean()
        val = float(p[0]) * mu if amb.dim == 1 else float(p @ mu)
        best = max(best, val)
    return best


def build_mean_set(amb: AmbiguitySet, delta: float = 0.05) -> MeanSet:
    """Support values of the mean set on a fresh direction net."""
    net = build_direction_net(amb.dim, delta)
    means = np.atleast_2d(amb.member_means().reshape(len(amb.members), -1))
    values = (net.directions @ means.T).max(axis=1)
    return MeanSet(
        dimension=amb.dim,
        net=net,
        support_values=values,
        label=amb.label,
    )


def distance_to_mean_set(mean_set: MeanSet, y) -> float:
    """max(0, max over net directions of <p, y> - g(p)).

    Equals dist(y, M) up to a one-sided net error of order
    delta * (|y| + max|g|): the net value never exceeds the true distance.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.shape != (mean_set.dimension,):
        raise ValueError(f"point has shape {y.shape}, expected ({mean_set.dimension},)")
    if not np.all(np.isfinite(y)):
        raise ValueError("point must be finite")
    gaps = mean_set.net.directions @ y - mean_set.support_values
    return max(0.0, float(gaps.max()))


def contains(mean_set: MeanSet, y, tol: float | None = None) -> bool:
    """Membership test at tolerance tol (defaults to 10 * net delta)."""
    if tol is None:
        tol = 10.0 * mean_set.net.delta
    return distance_to_mean_set(mean_set, y) <= tol
