"""Model layer: member distributions, events, and ambiguity sets.

An ambiguity set is a finite family of fully specified distributions. Two
member kinds exist: finite discrete laws (exact arithmetic everywhere) and a
two-sided Pareto law (closed-form tails and truncated moments, dimension 1
only). Everything downstream -- upper expectations, capacities, samplers,
dynamic programs -- consumes these objects and nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NonIntegrable, NotConvergent

__all__ = [
    "AmbiguitySet",
    "Event",
    "FiniteDiscrete",
    "TestFunction",
    "TwoSidedPareto",
]

_WEIGHT_TOL = 1e-12

# Smallest uniform fed to inverse CDFs; keeps heavy-tail draws finite.
_U_FLOOR = 2.0 ** -64


def _as_value_array(values: Sequence) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim not in (1, 2):
        raise ValueError(f"atom values must be scalars or flat vectors, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Event:
    """One-dimensional marginal event with exact complement semantics.

    Kinds: half-lines ("ge", "gt", "le", "lt"), absolute-value half-lines
    ("abs_ge", "abs_gt", "abs_le", "abs_lt"), and intervals ("between" for
    a <= X <= b, "between_open" for a < X < b) with their complements
    ("outside", "outside_closed").
    """

    kind: str
    a: float
    b: float = math.nan

    _COMPLEMENTS = {
        "ge": "lt", "lt": "ge", "gt": "le", "le": "gt",
        "abs_ge": "abs_lt", "abs_lt": "abs_ge",
        "abs_gt": "abs_le", "abs_le": "abs_gt",
        "between": "outside", "outside": "between",
        "between_open": "outside_closed", "outside_closed": "between_open",
    }

    def __post_init__(self) -> None:
        if self.kind not in self._COMPLEMENTS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.kind in ("between", "outside", "between_open", "outside_closed"):
            if not (self.a <= self.b):
                raise ValueError(f"interval event needs a <= b, got [{self.a}, {self.b}]")

    def complement(self) -> "Event":
        return Event(self._COMPLEMENTS[self.kind], self.a, self.b)

    def holds(self, x):
        """Vectorized membership indicator."""
        x = np.asarray(x, dtype=float)
        k = self.kind
        if k == "ge":
            return x >= self.a
        if k == "gt":
            return x > self.a
        if k == "le":
            return x <= self.a
        if k == "lt":
            return x < self.a
        if k == "abs_ge":
            return np.abs(x) >= self.a
        if k == "abs_gt":
            return np.abs(x) > self.a
        if k == "abs_le":
            return np.abs(x) <= self.a
        if k == "abs_lt":
            return np.abs(x) < self.a
        if k == "between":
            return (x >= self.a) & (x <= self.b)
        if k == "outside":
            return (x < self.a) | (x > self.b)
        if k == "between_open":
            return (x > self.a) & (x < self.b)
        # outside_closed
        return (x <= self.a) | (x >= self.b)

    def describe(self) -> str:
        k = self.kind
        if k in ("between", "between_open"):
            lo, hi = ("[", "]") if k == "between" else ("(", ")")
            return f"X in {lo}{self.a}, {self.b}{hi}"
        if k in ("outside", "outside_closed"):
            return f"not ({Event(self._COMPLEMENTS[k], self.a, self.b).describe()})"
        op = {"ge": ">=", "gt": ">", "le": "<=", "lt": "<"}[k.removeprefix("abs_")]
        var = "|X|" if k.startswith("abs_") else "X"
        return f"{var} {op} {self.a}"


class FiniteDiscrete:
    """Finitely supported law given by (value, weight) atoms.

    Atom values must be pairwise distinct and weights strictly positive,
    summing to 1 within 1e-12. Values may be scalars (dimension 1) or flat
    vectors of a common dimension. Atoms are stored sorted (lexicographically
    for vectors), which fixes the inverse-CDF order.
    """

    kind = "finite"

    def __init__(self, atoms: Sequence[tuple]) -> None:
        if not atoms:
            raise ValueError("FiniteDiscrete needs at least one atom")
        values = _as_value_array([a[0] for a in atoms])
        weights = np.asarray([a[1] for a in atoms], dtype=float)
        if np.any(weights <= 0):
            raise ValueError("atom weights must be strictly positive")
        total = math.fsum(weights.tolist())
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"atom weights must sum to 1 within {_WEIGHT_TOL}, got {total!r}")
        if not np.all(np.isfinite(values)):
            raise ValueError("atom values must be finite")

        vals2d = values.reshape(len(weights), -1)
        order = np.lexsort(vals2d.T[::-1])
        values, weights = values[order], weights[order]
        vals2d = vals2d[order]
        if any(tuple(vals2d[i]) == tuple(vals2d[i + 1]) for i in range(len(weights) - 1)):
            raise ValueError("atom values must be pairwise distinct")

        self._values = values
        self._weights = weights
        self._cumw = np.cumsum(weights)
        self._cumw[-1] = 1.0  # exact top end for searchsorted

    # -- construction helpers -------------------------------------------------

    @classmethod
    def point_mass(cls, value) -> "FiniteDiscrete":
        return cls([(value, 1.0)])

    @classmethod
    def from_arrays(cls, values, weights) -> "FiniteDiscrete":
        """Build from parallel arrays, merging exactly equal values."""
        values = _as_value_array(values)
        weights = np.asarray(weights, dtype=float)
        merged: dict = {}
        for v, w in zip(values.reshape(len(weights), -1), weights):
            key = tuple(v)
            merged[key] = merged.get(key, 0.0) + w
        flat = [(k if len(k) > 1 else k[0], w) for k, w in merged.items()]
        return cls(flat)

    # -- basic shape ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return 1 if self._values.ndim == 1 else self._values.shape[1]

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def support_radius(self) -> float:
        if self._values.ndim == 1:
            return float(np.max(np.abs(self._values)))
        return float(np.max(np.linalg.norm(self._values, axis=1)))

    # -- exact moments --------------------------------------------------------

    def expectation(self, f: Callable) -> float:
        """Exact weighted sum of f over the atoms (accumulated with fsum)."""
        return math.fsum(w * float(f(v)) for v, w in zip(self._values, self._weights))

    def mean(self):
        if self._values.ndim == 1:
            return math.fsum((self._weights * self._values).tolist())
        return np.array([
            math.fsum((self._weights * self._values[:, j]).tolist())
            for j in range(self._values.shape[1])
        ])

    def second_moment(self) -> float:
        """E[X^2] in dimension 1, E[|X|^2] otherwise."""
        if self._values.ndim == 1:
            sq = self._values ** 2
        else:
            sq = np.sum(self._values ** 2, axis=1)
        return math.fsum((self._weights * sq).tolist())

    def truncated_mean(self, c: float) -> float:
        self._require_dim1()
        clipped = np.clip(self._values, -c, c)
        return math.fsum((self._weights * clipped).tolist())

    def truncated_second(self, c: float) -> float:
        """E[X^2 /\\ c^2]."""
        self._require_dim1()
        return math.fsum((self._weights * np.minimum(self._values ** 2, c * c)).tolist())

    def plus_excess(self, c: float) -> float:
        """E[(|X| - c)^+]."""
        self._require_dim1()
        return math.fsum((self._weights * np.maximum(np.abs(self._values) - c, 0.0)).tolist())

    # -- probabilities --------------------------------------------------------

    def prob(self, event: Event) -> float:
        self._require_dim1()
        mask = event.holds(self._values)
        return math.fsum(self._weights[mask].tolist()) if mask.any() else 0.0

    def abs_survival(self, x: float) -> float:
        """P(|X| >= x)."""
        return self.prob(Event("abs_ge", x))

    # -- sampling -------------------------------------------------------------

    def icdf(self, u: np.ndarray) -> np.ndarray:
        """Inverse CDF in the stored atom order; u in [0, 1)."""
        idx = np.searchsorted(self._cumw, u, side="right")
        idx = np.minimum(idx, len(self._weights) - 1)
        return self._values[idx]

    # -- derived laws ---------------------------------------------------------

    def projected(self, p) -> "FiniteDiscrete":
        """Law of <p, X>; collapses atoms that project to the same point."""
        p = np.asarray(p, dtype=float)
        proj = self._values @ p if self._values.ndim == 2 else self._values * float(p)
        return FiniteDiscrete.from_arrays(proj, self._weights)

    def scaled(self, a: float) -> "FiniteDiscrete":
        return FiniteDiscrete.from_arrays(self._values * a, self._weights)

    def shifted(self, b: float) -> "FiniteDiscrete":
        self._require_dim1()
        return FiniteDiscrete.from_arrays(self._values + b, self._weights)

    def truncated(self, c: float) -> "FiniteDiscrete":
        self._require_dim1()
        return FiniteDiscrete.from_arrays(np.clip(self._values, -c, c), self._weights)

    def _require_dim1(self) -> None:
        if self._values.ndim != 1:
            raise ValueError("operation defined for dimension 1 only")

    def __repr__(self) -> str:
        pairs = ", ".join(f"{v}:{w:g}" for v, w in zip(self._values.tolist(), self._weights.tolist()))
        return f"FiniteDiscrete({pairs})"


class TwoSidedPareto:
    """Two-sided Pareto law: |X| has tail P(|X| > x) = (scale/x)^alpha for
    x >= scale (and 1 below), the sign is +1 with probability right_mass,
    independent of the magnitude. Dimension 1 only.

    The mean exists iff alpha > 1 and equals (2*right_mass - 1)*scale*alpha/(alpha-1);
    the second moment is finite iff alpha > 2.
    """

    kind = "pareto"
    dim = 1

    def __init__(self, alpha: float, scale: float, right_mass: float = 0.5) -> None:
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        if not scale > 0:
            raise ValueError(f"scale must be positive, got {scale}")
        if not 0.0 <= right_mass <= 1.0:
            raise ValueError(f"right_mass must lie in [0, 1], got {right_mass}")
        self.alpha = float(alpha)
        self.scale = float(scale)
        self.right_mass = float(right_mass)

    # -- tails ----------------------------------------------------------------

    def abs_survival(self, x: float) -> float:
        """P(|X| >= x) = P(|X| > x); the law is atomless."""
        if x <= self.scale:
            return 1.0
        return (self.scale / x) ** self.alpha

    def cdf(self, x: float) -> float:
        r, s, a = self.right_mass, self.scale, self.alpha
        if x <= -s:
            return (1.0 - r) * (s / -x) ** a
        if x < s:
            return 1.0 - r
        return 1.0 - r * (s / x) ** a

    def prob(self, event: Event) -> float:
        k, a, b = event.kind, event.a, event.b
        if k in ("ge", "gt"):
            return 1.0 - self.cdf(a)
        if k in ("le", "lt"):
            return self.cdf(a)
        if k in ("abs_ge", "abs_gt"):
            return self.abs_survival(a) if a > 0 else 1.0
        if k in ("abs_le", "abs_lt"):
            return 1.0 - self.abs_survival(a) if a > 0 else 0.0
        if k in ("between", "between_open"):
            return max(0.0, self.cdf(b) - self.cdf(a))
        # outside variants
        return 1.0 - max(0.0, self.cdf(b) - self.cdf(a))

    # -- moments --------------------------------------------------------------

    def abs_mean(self) -> float:
        if self.alpha <= 1:
            raise NotConvergent(f"Pareto alpha={self.alpha} <= 1: mean does not exist")
        return self.scale * self.alpha / (self.alpha - 1.0)

    def mean(self) -> float:
        return (2.0 * self.right_mass - 1.0) * self.abs_mean()

    def second_moment(self) -> float:
        if self.alpha <= 2:
            return math.inf
        return self.scale ** 2 * self.alpha / (self.alpha - 2.0)

    def truncated_abs_mean(self, c: float) -> float:
        """E[|X| /\\ c], closed form."""
        s, a = self.scale, self.alpha
        if c <= s:
            return c
        if a == 1.0:
            return s * (1.0 + math.log(c / s))
        return s + (s ** a * c ** (1.0 - a) - s) / (1.0 - a)

    def truncated_mean(self, c: float) -> float:
        """E[(-c) \\/ X /\\ c] = (2*right_mass - 1) * E[|X| /\\ c]."""
        return (2.0 * self.right_mass - 1.0) * self.truncated_abs_mean(c)

    def truncated_second(self, c: float) -> float:
        """E[X^2 /\\ c^2], closed form."""
        s, a = self.scale, self.alpha
        if c <= s:
            return c * c
        if a == 2.0:
            return s * s * (1.0 + 2.0 * math.log(c / s))
        return s * s + s ** a * (c ** (2.0 - a) - s ** (2.0 - a)) / (1.0 - a / 2.0)

    def plus_excess(self, c: float) -> float:
        """E[(|X| - c)^+] = integral of the absolute tail beyond c."""
        s, a = self.scale, self.alpha
        if a <= 1:
            return math.inf
        if c < s:
            return (s - c) + s / (a - 1.0)
        return s ** a * c ** (1.0 - a) / (a - 1.0)

    # -- numeric expectation of a general test function -----------------------

    def expectation(self, f: Callable, rtol: float = 1e-10) -> float:
        """Integrate f against the density by doubling-cutoff quadrature.

        Raises NonIntegrable when the partial integrals fail to stabilize
        (growth of f at or above the tail exponent).
        """
        from scipy.integrate import quad

        r, s, a = self.right_mass, self.scale, self.alpha

        def density_part(sign: float, lo: float, hi: float) -> float:
            val, _ = quad(
                lambda x: float(f(sign * x)) * a * s ** a * x ** (-a - 1.0),
                lo, hi, limit=200,
            )
            return val

        total = 0.0
        lo, hi = s, 4.0 * s
        for _ in range(200):
            piece = 0.0
            if r > 0:
                piece += r * density_part(1.0, lo, hi)
            if r < 1:
                piece += (1.0 - r) * density_part(-1.0, lo, hi)
            total += piece
            if abs(piece) <= rtol * max(1.0, abs(total)):
                return total
            if abs(total) > 1e12:
                break
            lo, hi = hi, 2.0 * hi
        raise NonIntegrable(
            f"test function not integrable against Pareto(alpha={a}, scale={s})"
        )

    # -- derived laws ---------------------------------------------------------

    def scaled(self, a: float) -> "TwoSidedPareto":
        """Law of a*X; a < 0 mirrors the sign masses, a = 0 is rejected."""
        if a == 0.0:
            raise ValueError("zero scaling collapses the law to a point mass")
        rm = self.right_mass if a > 0 else 1.0 - self.right_mass
        return TwoSidedPareto(self.alpha, abs(a) * self.scale, rm)

    # -- sampling -------------------------------------------------------------

    def icdf(self, u: np.ndarray) -> np.ndarray:
        u = np.maximum(np.asarray(u, dtype=float), _U_FLOOR)
        r, s, a = self.right_mass, self.scale, self.alpha
        left = 1.0 - r
        out = np.empty_like(u)
        neg = u < left
        if neg.any():
            out[neg] = -s * (left / u[neg]) ** (1.0 / a)
        pos = ~neg
        if pos.any():
            tail = np.maximum(1.0 - u[pos], _U_FLOOR)
            out[pos] = s * (r / tail) ** (1.0 / a)
        return out

    def __repr__(self) -> str:
        return f"TwoSidedPareto(alpha={self.alpha}, scale={self.scale}, right_mass={self.right_mass})"


Distribution = FiniteDiscrete | TwoSidedPareto


class AmbiguitySet:
    """Nonempty finite family of distributions sharing one dimension."""

    def __init__(self, members: Sequence[Distribution], label: str = "") -> None:
        members = tuple(members)
        if not members:
            raise ValueError("AmbiguitySet needs at least one member")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise ValueError(f"members disagree on dimension: {sorted(dims)}")
        self.members = members
        self.label = label
        self.dim = dims.pop()

    @property
    def is_finite_support(self) -> bool:
        return all(isinstance(m, FiniteDiscrete) for m in self.members)

    def member_means(self) -> np.ndarray:
        """Matrix of member means, shape (k,) in dimension 1 else (k, d).

        Raises NotConvergent when a Pareto member has no mean.
        """
        means = [m.mean() for m in self.members]
        return np.asarray(means, dtype=float)

    def heaviest_alpha(self) -> float:
        """Smallest Pareto tail exponent present, +inf if none."""
        alphas = [m.alpha for m in self.members if isinstance(m, TwoSidedPareto)]
        return min(alphas) if alphas else math.inf

    def support_radius(self) -> float:
        """Max |atom| over finite members, Pareto scale floor otherwise."""
        radius = 0.0
        for m in self.members:
            radius = max(radius, m.support_radius if isinstance(m, FiniteDiscrete) else m.scale)
        return radius

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"AmbiguitySet({len(self.members)} members, d={self.dim}{tag})"


@dataclass(frozen=True)
class TestFunction:
    """Callable with declared Lipschitz and sup bounds (inf when unbounded)."""

    evaluator: Callable
    lipschitz_bound: float = math.inf
    sup_bound: float = math.inf
    name: str = ""

    def __call__(self, x):
        return self.evaluator(x)
