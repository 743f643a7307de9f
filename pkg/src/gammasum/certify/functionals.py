"""Completely monotone test functions and the product functionals F and G.

For ``x`` in the nonnegative orthant

    F(x) = prod_j exp(shape sqrt(x_j)) (1 + sqrt(x_j))**(-shape)
    G(x) = prod_j (1 + sqrt(x_j))**(-shape)

``F`` is Schur-concave and ``G`` Schur-convex. They are the Laplace
transforms, at one rate, of the centred and uncentred weighted gamma sums,
so an exponential mixture ``Phi(x) = sum_i w_i exp(-s_i x)`` has

    E Phi(c + S - E S) = sum_i w_i exp(-s_i c) F(s_i**2 a)
    E Phi(S)           = sum_i w_i G(s_i**2 a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import DivergenceError, DomainError, PreconditionError
from ..numerics import DEFAULT_QUADRATURE, QuadratureConfig, integrate


def log_F(shape: float, x) -> float:
    r = np.sqrt(np.asarray(x, dtype=float))
    return shape * math.fsum(r - np.log1p(r))


def log_G(shape: float, x) -> float:
    r = np.sqrt(np.asarray(x, dtype=float))
    return -shape * math.fsum(np.log1p(r))


def F(shape: float, x) -> float:
    return math.exp(log_F(shape, x))


def G(shape: float, x) -> float:
    return math.exp(log_G(shape, x))


def grad_log_F(shape: float, x) -> np.ndarray:
    """``d log F / d x_k = (shape/2) / (1 + sqrt(x_k))``."""
    return 0.5 * shape / (1.0 + np.sqrt(np.asarray(x, dtype=float)))


def grad_log_G(shape: float, x) -> np.ndarray:
    """``d log G / d x_k = -(shape/2) / (sqrt(x_k) (1 + sqrt(x_k)))``."""
    r = np.sqrt(np.asarray(x, dtype=float))
    return -0.5 * shape / (r * (1.0 + r))


@dataclass(frozen=True)
class ExponentialMixture:
    """``Phi(x) = sum_i w_i exp(-s_i x)``, or the power law ``x**(-q)``.

    The power law is the mixture with density ``t**(q-1) / Gamma(q)`` over
    rates ``t``; expectations against it are one quadrature over ``t``.
    """

    atoms: tuple = field(default=())
    power: Optional[float] = None

    def __post_init__(self):
        atoms = tuple((float(w), float(s)) for w, s in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if self.power is not None:
            if atoms:
                raise PreconditionError("a power-law mixture carries no atoms")
            if not self.power > 0:
                raise PreconditionError(f"power-law exponent must be positive, got {self.power!r}")
            object.__setattr__(self, "power", float(self.power))
        elif not atoms:
            raise PreconditionError("mixture needs at least one atom")
        for w, s in atoms:
            if not (w > 0 and s > 0 and math.isfinite(w) and math.isfinite(s)):
                raise PreconditionError(f"atom weights and rates must be positive, got {(w, s)}")

    @classmethod
    def single(cls, rate: float = 1.0, weight: float = 1.0) -> "ExponentialMixture":
        return cls(((weight, rate),))

    @classmethod
    def power_law(cls, q: float) -> "ExponentialMixture":
        return cls(power=q)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "ExponentialMixture":
        """1-5 atoms, rates log-uniform on [1e-2, 1e2], Dirichlet weights."""
        k = int(rng.integers(1, 6))
        rates = 10.0 ** rng.uniform(-2.0, 2.0, size=k)
        weights = rng.dirichlet(np.ones(k))
        return cls(tuple(zip(weights.tolist(), rates.tolist())))

    @property
    def tag(self) -> str:
        return f"power:{self.power!r}" if self.power is not None else f"atoms:{len(self.atoms)}"

    def __call__(self, x: float) -> float:
        if self.power is not None:
            return x ** (-self.power)
        return math.fsum(w * math.exp(-s * x) for w, s in self.atoms)

    def to_dict(self) -> dict:
        if self.power is not None:
            return {"power": self.power}
        return {"atoms": [list(a) for a in self.atoms]}

    @classmethod
    def from_dict(cls, d: dict) -> "ExponentialMixture":
        if d.get("power") is not None:
            return cls(power=d["power"])
        return cls(tuple(tuple(a) for a in d["atoms"]))


def centred_domain_limit(shape: float, n: int, c: float) -> float:
    """Bound ``c**2 / (shape**2 n)`` on ``sum a_j`` keeping ``c + S - E S > 0``."""
    return c * c / (shape * shape * n)


def _check_centred_domain(shape, a, c):
    a = np.asarray(a, dtype=float)
    lim = centred_domain_limit(shape, a.size, c)
    if not math.fsum(a) < lim:
        raise DomainError(f"sum(a) = {math.fsum(a)!r} is outside the domain sum(a) < {lim!r}")


def _power_integrand(log_fun, shape, q, a, c):
    a = np.asarray(a, dtype=float)
    lg = math.lgamma(q)

    def f(t):
        if t <= 0:
            return 0.0
        return math.exp((q - 1.0) * math.log(t) - t * c + log_fun(shape, t * t * a) - lg)

    return f


def _power_difference(log_fun, shape, q, a, b, c, cfg):
    fa = _power_integrand(log_fun, shape, q, a, c)
    fb = _power_integrand(log_fun, shape, q, b, c)
    return integrate(lambda t: fb(t) - fa(t), 0.0, math.inf, cfg, singularity=q - 1.0, split=1.0)


def centred_expectation(mix: ExponentialMixture, shape: float, a, c: float,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """``E Phi(c + sum sqrt(a_j)(X_j - shape))`` and its error estimate."""
    _check_centred_domain(shape, a, c)
    a = np.asarray(a, dtype=float)
    if mix.power is None:
        val = math.fsum(w * math.exp(-s * c + log_F(shape, s * s * a)) for w, s in mix.atoms)
        return val, 0.0
    f = _power_integrand(log_F, shape, mix.power, a, c)
    return integrate(f, 0.0, math.inf, cfg, singularity=mix.power - 1.0, split=1.0)


def centred_margin(mix: ExponentialMixture, shape: float, a, b, c: float,
                   cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """``E Phi(c + S_b - E S_b) - E Phi(c + S_a - E S_a)`` and its error.

    Power laws use a single quadrature of the difference of integrands.
    """
    _check_centred_domain(shape, a, c)
    _check_centred_domain(shape, b, c)
    if mix.power is None:
        va, _ = centred_expectation(mix, shape, a, c)
        vb, _ = centred_expectation(mix, shape, b, c)
        return vb - va, 0.0
    return _power_difference(log_F, shape, mix.power, a, b, c, cfg)


def uncentred_finite(mix: ExponentialMixture, shape: float, a) -> bool:
    """``E S**(-q)`` is finite iff ``q < n_effective * shape``."""
    if mix.power is None:
        return True
    n_eff = int(np.count_nonzero(np.asarray(a, dtype=float) > 0))
    return mix.power < n_eff * shape


def uncentred_expectation(mix: ExponentialMixture, shape: float, a,
                          cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """``E Phi(sum sqrt(a_j) X_j)``; ``inf`` for a divergent power law."""
    a = np.asarray(a, dtype=float)
    if mix.power is None:
        return math.fsum(w * math.exp(log_G(shape, s * s * a)) for w, s in mix.atoms), 0.0
    if not uncentred_finite(mix, shape, a):
        return math.inf, 0.0
    f = _power_integrand(log_G, shape, mix.power, a, 0.0)
    return integrate(f, 0.0, math.inf, cfg, singularity=mix.power - 1.0, split=1.0)


def uncentred_margin(mix: ExponentialMixture, shape: float, a, b,
                     cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """``E Phi(S_a) - E Phi(S_b)`` (both finite) and its error."""
    if mix.power is None:
        va, _ = uncentred_expectation(mix, shape, a)
        vb, _ = uncentred_expectation(mix, shape, b)
        return va - vb, 0.0
    if not (uncentred_finite(mix, shape, a) and uncentred_finite(mix, shape, b)):
        raise DivergenceError("power-law expectation diverges", value=math.inf)
    value, err = _power_difference(log_G, shape, mix.power, b, a, 0.0, cfg)
    return value, err
