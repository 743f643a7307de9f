"""Closed-form transforms of the weighted gamma sum and its centred moments."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MomentOverflowError, PreconditionError
from .model import GammaSumModel

MAX_MOMENT_ORDER = 60


def _check_mgf_domain(model: GammaSumModel, t: float):
    s_max = float(model.scales[0])
    if t * s_max >= 1.0:
        raise DomainError(
            f"moment generating function diverges for t={t!r} >= 1/sqrt(a_1) = {1.0 / s_max!r}"
        )


def mgf(model: GammaSumModel, t: float) -> float:
    """``E exp(t S) = prod_j (1 - t sqrt(a_j))**(-shape)`` for ``t < 1/sqrt(a_1)``."""
    _check_mgf_domain(model, t)
    s = model.scales
    return float(np.exp(-model.shape * np.sum(np.log1p(-t * s))))


def centred_log_mgf(model: GammaSumModel, t: float) -> float:
    """``log E exp(t (S - E S)) = -shape * sum_j [t s_j + log(1 - t s_j)]``."""
    _check_mgf_domain(model, t)
    s = model.scales
    return float(-model.shape * np.sum(t * s + np.log1p(-t * s)))


def cf(model: GammaSumModel, t):
    """Characteristic function ``prod_j (1 - i sqrt(a_j) t)**(-shape)``.

    Each factor uses the principal branch. Accepts scalar or array ``t``.
    """
    s = model.scales
    tt = np.asarray(t, dtype=float)
    z = 1.0 - 1j * np.multiply.outer(tt, s)
    # sum of principal logs keeps the phase continuous past pi
    out = np.exp(-model.shape * np.sum(np.log(z), axis=-1))
    return complex(out) if out.ndim == 0 else out


def cf_modulus(model: GammaSumModel, t):
    """``|cf(t)| = exp(-(shape/2) * sum_j log(1 + a_j t^2))``."""
    a = model.positive_weights
    tt = np.asarray(t, dtype=float)
    out = np.exp(-0.5 * model.shape * np.sum(np.log1p(np.multiply.outer(tt * tt, a)), axis=-1))
    return float(out) if out.ndim == 0 else out


def cf_envelope(model: GammaSumModel, m: int, t):
    """Uniform bound ``(1 + t^2/m)**(-m*shape/2)`` on ``|cf|``.

    Valid when the largest weight, after normalizing the weights to sum one,
    is at most ``1/m``. Weights with total ``s != 1`` are handled by the
    scaling ``cf(t) = cf_normalized(t * sqrt(s))``.
    """
    if m < 1 or int(m) != m:
        raise PreconditionError(f"m must be a positive integer, got {m!r}")
    a1 = model.weights.normalized().canonical()[0]
    if a1 > 1.0 / m + 1e-12:
        raise PreconditionError(f"largest normalized weight {a1!r} exceeds 1/m = {1.0 / m!r}")
    tt = np.asarray(t, dtype=float)
    out = (1.0 + model.weights.total * tt * tt / m) ** (-m * model.shape / 2.0)
    return float(out) if out.ndim == 0 else out


def cumulant(model: GammaSumModel, k: int) -> float:
    """``k``-th cumulant ``shape * (k-1)! * sum_j a_j**(k/2)`` of the centred sum."""
    if int(k) != k or k < 2:
        raise PreconditionError(f"cumulant order must be an integer >= 2, got {k!r}")
    k = int(k)
    a = model.positive_weights
    power_sum = float(np.sum(a ** (k / 2.0)))
    if k <= 20:
        return model.shape * math.factorial(k - 1) * power_sum
    # log-domain factorial beyond 20
    return math.exp(math.log(model.shape) + math.lgamma(k) + math.log(power_sum))


@dataclass(frozen=True)
class MomentTable:
    """Cumulants ``kappa_2..kappa_K`` and central moments ``mu_0..mu_K``."""

    shape: float
    weights: tuple
    max_order: int
    cumulants: tuple  # index 0 holds kappa_2
    central_moments: tuple  # index k holds mu_k

    def moment(self, k: int) -> float:
        return self.central_moments[k]

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "weights": list(self.weights),
            "orders": list(range(self.max_order + 1)),
            "cumulants": {str(k): v for k, v in zip(range(2, self.max_order + 1), self.cumulants)},
            "central_moments": list(self.central_moments),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def central_moments(model: GammaSumModel, K: int) -> MomentTable:
    """Central moments up to order ``K`` by the cumulant recursion.

    ``mu_m = sum_{j=2}^{m} C(m-1, j-1) kappa_j mu_{m-j}``; every term is
    nonnegative, so the table is free of cancellation.
    """
    if int(K) != K or K < 1:
        raise PreconditionError(f"max order must be a positive integer, got {K!r}")
    K = int(K)
    if K > MAX_MOMENT_ORDER:
        raise MomentOverflowError(f"moment order {K} exceeds the fixed-precision limit {MAX_MOMENT_ORDER}")
    kappa = [0.0, 0.0] + [cumulant(model, j) for j in range(2, K + 1)]
    mu = [1.0, 0.0]
    for m in range(2, K + 1):
        mu.append(math.fsum(math.comb(m - 1, j - 1) * kappa[j] * mu[m - j] for j in range(2, m + 1)))
    mu = mu[: K + 1]
    if not all(math.isfinite(v) for v in mu):
        raise MomentOverflowError("central moment overflowed")
    return MomentTable(
        shape=model.shape,
        weights=tuple(model.weights.a),
        max_order=K,
        cumulants=tuple(kappa[2:]),
        central_moments=tuple(mu),
    )
