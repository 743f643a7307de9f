"""Weight vectors, the weighted gamma-sum model and majorization tools.

Weights are stored as the squared coefficients ``a_j``; the random
variable is ``S = sum_j sqrt(a_j) X_j`` with ``X_j`` i.i.d. Gamma(shape).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DomainError, PreconditionError

SUM_TOL = 1e-12


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights with at least one positive entry."""

    a: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.a)
        if not vals:
            raise ConfigError("weight vector is empty")
        if any(not math.isfinite(v) or v < 0 for v in vals):
            raise ConfigError(f"weights must be finite and nonnegative: {vals}")
        if not any(v > 0 for v in vals):
            raise ConfigError("at least one weight must be positive")
        object.__setattr__(self, "a", vals)

    @classmethod
    def parse(cls, text: str, normalize: bool = False) -> "WeightVector":
        """Parse a comma-separated list such as ``"0.5,0.3,0.2"``."""
        try:
            vals = [float(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse weights {text!r}: {exc}") from None
        w = cls(tuple(vals))
        return w.normalized() if normalize else w

    def __len__(self):
        return len(self.a)

    def __iter__(self):
        return iter(self.a)

    def __getitem__(self, i):
        return self.a[i]

    @property
    def canonical_order(self) -> bool:
        return all(x >= y for x, y in zip(self.a, self.a[1:]))

    def canonical(self) -> "WeightVector":
        return WeightVector(tuple(sorted(self.a, reverse=True)))

    @property
    def total(self) -> float:
        return math.fsum(self.a)

    def normalized(self) -> "WeightVector":
        s = self.total
        return WeightVector(tuple(v / s for v in self.a))

    def positive(self) -> "WeightVector":
        """The sub-vector of strictly positive weights, in canonical order."""
        return WeightVector(tuple(sorted((v for v in self.a if v > 0), reverse=True)))

    def to_json(self) -> str:
        return json.dumps(list(self.a))

    @classmethod
    def from_json(cls, text: str) -> "WeightVector":
        return cls(tuple(json.loads(text)))


@dataclass(frozen=True)
class GammaSumModel:
    """``S = sum_j sqrt(a_j) X_j`` with ``X_j`` i.i.d. Gamma(shape, 1)."""

    shape: float
    weights: WeightVector

    def __post_init__(self):
        if not isinstance(self.weights, WeightVector):
            object.__setattr__(self, "weights", WeightVector(tuple(self.weights)))
        shape = float(self.shape)
        if not (shape > 0 and math.isfinite(shape)):
            raise ConfigError(f"shape must be positive and finite, got {self.shape!r}")
        object.__setattr__(self, "shape", shape)

    @classmethod
    def of(cls, shape: float, weights: Sequence[float]) -> "GammaSumModel":
        return cls(shape, WeightVector(tuple(weights)))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def n_effective(self) -> int:
        return sum(1 for v in self.weights if v > 0)

    @property
    def positive_weights(self) -> np.ndarray:
        """Strictly positive weights sorted descending."""
        return np.array(self.weights.positive().a)

    @property
    def scales(self) -> np.ndarray:
        """Scale ``sqrt(a_j)`` of each nonzero summand, descending."""
        return np.sqrt(self.positive_weights)

    @property
    def mean(self) -> float:
        return self.shape * float(np.sum(self.scales))

    @property
    def variance(self) -> float:
        return self.shape * self.weights.total

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def equal_weights(self) -> bool:
        w = self.positive_weights
        return bool(np.all(w == w[0]))

    @property
    def total_shape(self) -> float:
        """``n_effective * shape``: the exponent of ``x**(n*shape - 1)`` at 0."""
        return self.n_effective * self.shape

    def to_dict(self) -> dict:
        return {"shape": self.shape, "weights": list(self.weights.a)}

    @classmethod
    def from_dict(cls, d: dict) -> "GammaSumModel":
        return cls(d["shape"], WeightVector(tuple(d["weights"])))


def _as_array(v) -> np.ndarray:
    if isinstance(v, WeightVector):
        return np.array(v.a)
    return np.asarray(v, dtype=float)


def prefix_differences(a, b) -> np.ndarray:
    """Descending prefix sums of ``a`` minus those of ``b``."""
    x = np.sort(_as_array(a))[::-1]
    y = np.sort(_as_array(b))[::-1]
    return np.cumsum(x) - np.cumsum(y)


def is_majorized(a, b, tol: float = SUM_TOL) -> bool:
    """True iff ``a`` majorizes ``b`` (``a`` is the more spread-out vector)."""
    x, y = _as_array(a), _as_array(b)
    if x.shape != y.shape:
        raise PreconditionError(f"length mismatch: {x.size} vs {y.size}")
    scale = max(1.0, float(np.sum(np.abs(x))))
    if abs(math.fsum(x) - math.fsum(y)) > tol * scale:
        raise PreconditionError(
            f"sums differ: {math.fsum(x)!r} vs {math.fsum(y)!r}"
        )
    return bool(np.all(prefix_differences(x, y) >= -tol * scale))


@dataclass(frozen=True)
class MajorizationPair:
    """``upper`` majorizes ``lower``; ``witness`` holds the prefix-sum gaps."""

    upper: WeightVector
    lower: WeightVector
    witness: tuple = field(default=())

    def __post_init__(self):
        if len(self.upper) != len(self.lower):
            raise PreconditionError("majorization pair of unequal lengths")
        if not is_majorized(self.upper, self.lower):
            raise PreconditionError(
                f"{self.upper.a} does not majorize {self.lower.a}"
            )
        if not self.witness:
            object.__setattr__(
                self,
                "witness",
                tuple(float(v) for v in prefix_differences(self.upper, self.lower)),
            )

    def to_dict(self) -> dict:
        return {"upper": list(self.upper.a), "lower": list(self.lower.a)}


def robin_hood(a: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One T-transform: move mass from a larger to a smaller coordinate.

    The transfer never lets the two coordinates cross, so the result is
    majorized by ``a``. Returns a copy; ``a`` is returned unchanged when all
    coordinates are equal.
    """
    b = np.array(a, dtype=float)
    order = np.argsort(-b, kind="stable")
    if b[order[0]] == b[order[-1]]:
        return b
    while True:
        i, j = rng.choice(b.size, size=2, replace=False)
        if b[i] != b[j]:
            break
    if b[i] < b[j]:
        i, j = j, i
    delta = (b[i] - b[j]) / 2.0 * (1.0 - rng.random())
    b[i] -= delta
    b[j] += delta
    return b


def random_simplex_point(n: int, total: float, rng: np.random.Generator,
                         zero_prob: float = 0.25) -> np.ndarray:
    """Dirichlet(1) point scaled to ``total``, sometimes with zero entries."""
    a = rng.dirichlet(np.ones(n)) * total
    if n > 1 and rng.random() < zero_prob:
        k = int(rng.integers(1, n))
        idx = rng.choice(n, size=k, replace=False)
        a[idx] = 0.0
        a *= total / a.sum()
    return a


def random_majorization_pair(n: int, total: float, rng_seed) -> MajorizationPair:
    """Random ``(a, b)`` with ``a`` majorizing ``b`` and ``a != b``.

    ``a`` is drawn on the simplex scaled to ``total`` and ``b`` results from
    one to three Robin-Hood transfers. ``rng_seed`` may be an int, a
    sequence of ints or a :class:`numpy.random.Generator`.
    """
    if n < 2:
        raise PreconditionError("majorization pairs need n >= 2")
    if not total > 0:
        raise PreconditionError("total must be positive")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    while True:
        a = random_simplex_point(n, total, rng)
        b = a
        for _ in range(int(rng.integers(1, 4))):
            b = robin_hood(b, rng)
        # fix rounding so both sides share the same float sum
        b = b * (math.fsum(a) / math.fsum(b))
        if not np.array_equal(np.sort(a), np.sort(b)) and is_majorized(a, b):
            return MajorizationPair(WeightVector(tuple(a)), WeightVector(tuple(b)))


def schur_ostrowski_check(
    f: Callable[[np.ndarray], float],
    x,
    i: int,
    j: int,
    h: float | None = None,
    lower: float = 0.0,
) -> float:
    """``(x_i - x_j) * (df/dx_i - df/dx_j)`` by central differences.

    Negative values point to Schur-concavity along the ``(i, j)`` direction,
    positive to Schur-convexity. ``lower`` is the left edge of the domain of
    each coordinate; a step leaving it raises :class:`DomainError`.
    """
    x = _as_array(x).astype(float)
    if x[i] == x[j]:
        raise PreconditionError("schur_ostrowski_check needs x_i != x_j")
    partial = []
    for k in (i, j):
        hk = h if h is not None else 1e-5 * max(1.0, abs(x[k]))
        if x[k] - hk < lower:
            raise DomainError(
                f"step {hk:g} leaves the domain at coordinate {k} (x_k={x[k]:g})"
            )
        up, down = x.copy(), x.copy()
        up[k] += hk
        down[k] -= hk
        partial.append((f(up) - f(down)) / (2.0 * hk))
    return float((x[i] - x[j]) * (partial[0] - partial[1]))
