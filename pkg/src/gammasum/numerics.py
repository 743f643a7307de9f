"""Special functions and quadrature primitives.

``log_gamma`` and ``digamma`` wrap :mod:`scipy.special`; ``integrate`` and
``integrate_oscillatory`` wrap QUADPACK (via :func:`scipy.integrate.quad`)
with the endpoint substitution and Fourier-tail handling the density and
entropy code relies on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as _spi
from scipy import special as _sps

from .errors import (
    DomainError,
    NaNIntegrandError,
    NonConvergenceError,
    PreconditionError,
)

__all__ = [
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "log_gamma",
    "digamma",
    "integrate",
    "integrate_oscillatory",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances shared by every quadrature call.

    ``singularity_grading`` sharpens the endpoint substitution used for
    declared algebraic singularities: with grading ``g`` the map is
    ``x = lo + u**(g / (1 + beta))``, so ``g = 1`` yields a bounded
    integrand and ``g > 1`` one that vanishes at ``u = 0``.
    """

    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_subdivisions: int = 2**15
    singularity_grading: float = 1.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise PreconditionError("abs_tol and rel_tol must be positive")
        if self.max_subdivisions < 8:
            raise PreconditionError("max_subdivisions must be at least 8")
        if not self.singularity_grading >= 1:
            raise PreconditionError("singularity_grading must be >= 1")

    def to_dict(self):
        return {
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "max_subdivisions": self.max_subdivisions,
            "singularity_grading": self.singularity_grading,
        }


DEFAULT_QUADRATURE = QuadratureConfig()

# largest Fourier truncation point tried before giving up
MAX_TRUNCATION = 1e13


def _check_positive(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"{name} requires x > 0, got {x!r}")
    return arr


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0`` (scalar or array)."""
    arr = _check_positive(x, "log_gamma")
    out = _sps.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def digamma(x):
    """Logarithmic derivative of the gamma function for ``x > 0``."""
    arr = _check_positive(x, "digamma")
    out = _sps.digamma(arr)
    return float(out) if out.ndim == 0 else out


_QUAD_FAILURES = {
    "maximum number of subdivisions": 1,
    "roundoff error is detected in the extrapolation": 4,
    "occurrence of roundoff error": 2,
    "bad integrand behavior": 3,
    "divergent": 5,
}


def _quad_code(message: str) -> int:
    for key, code in _QUAD_FAILURES.items():
        if key in message:
            return code
    return 6


def _guard_nan(f):
    def wrapped(x):
        y = f(x)
        if y != y:
            raise NaNIntegrandError(f"integrand returned NaN at x={x!r}")
        return y

    return wrapped


def _quad(f, lo, hi, cfg: QuadratureConfig, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        out = _spi.quad(
            _guard_nan(f),
            lo,
            hi,
            epsabs=cfg.abs_tol,
            epsrel=cfg.rel_tol,
            limit=cfg.max_subdivisions,
            full_output=1,
            **kw,
        )
    value, err = float(out[0]), float(out[1])
    if len(out) > 3:
        code = _quad_code(str(out[3]))
        target = max(cfg.abs_tol, cfg.rel_tol * abs(value))
        # roundoff flags (2, and 4 with a small estimate) still carry a usable value
        if code == 1 or (code != 2 and err > 10 * target):
            raise NonConvergenceError(
                f"quadrature on [{lo}, {hi}] did not converge "
                f"(value={value:.6g}, err={err:.3g}): {out[3].splitlines()[0]}"
            )
    return value, err


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    singularity: Optional[float] = None,
    split: Optional[float] = None,
    points: Optional[Sequence[float]] = None,
):
    """Integrate ``f`` over ``[lo, hi]`` (``hi`` may be ``inf``).

    Parameters
    ----------
    f : callable
        Scalar integrand.
    lo, hi : float
        Interval end points.
    cfg : QuadratureConfig
        Tolerances and subdivision limit.
    singularity : float, optional
        Exponent ``beta > -1`` of an algebraic singularity at ``lo``: the
        caller guarantees ``f(x) * (x - lo)**(-beta)`` stays bounded near
        ``lo``. The piece ``[lo, lo + split]`` is then integrated in the
        variable ``u`` with ``x = lo + u**(g / (1 + beta))``.
    split : float, optional
        Length of the substituted piece; defaults to the whole interval
        when it is finite and to 1 otherwise.
    points : sequence of float, optional
        Interior break points (e.g. a density mode).

    Returns
    -------
    (value, err_est)
    """
    if not hi > lo:
        if hi == lo:
            return 0.0, 0.0
        raise PreconditionError(f"empty interval [{lo}, {hi}]")

    breaks = sorted(p for p in (points or ()) if lo < p < hi)
    if singularity is not None:
        beta = float(singularity)
        if not beta > -1:
            raise PreconditionError(f"singularity exponent must exceed -1, got {beta}")
        if split is None:
            split = (hi - lo) if math.isfinite(hi) else 1.0
        if breaks and split > breaks[0] - lo:
            split = breaks[0] - lo
        mid = min(lo + split, hi)
        q = cfg.singularity_grading / (1.0 + beta)

        def g(u):
            if u <= 0.0:
                u = np.finfo(float).tiny
            return f(lo + u ** q) * q * u ** (q - 1.0)

        v0, e0 = _quad(g, 0.0, (mid - lo) ** (1.0 / q), cfg)
        if mid >= hi:
            return v0, e0
        v1, e1 = integrate(f, mid, hi, cfg, points=breaks)
        return v0 + v1, e0 + e1

    edges = [lo, *breaks, hi]
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _quad(f, a, b, cfg)
        total += v
        err += e
    return total, err


def integrate_oscillatory(
    phi: Callable[[float], complex],
    x: float,
    decay_exponent: float,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    envelope_constant: float = 1.0,
    split: Optional[float] = None,
):
    """Fourier inversion ``(1/2pi) * int_R phi(t) exp(-i t x) dt``.

    ``phi`` must be a characteristic function (Hermitian, so the integral
    is ``(1/pi) * int_0^inf Re[phi(t) exp(-i t x)] dt``) with
    ``|phi(t)| <= envelope_constant * t**(-decay_exponent)``.

    ``[0, split]`` is integrated adaptively. For ``x != 0`` the tail is
    written as cosine and sine transforms of ``Re phi`` and ``Im phi`` and
    summed by QUADPACK's Fourier-integral extrapolation. For ``x == 0``, or
    when that extrapolation fails at very small ``|x|``, the tail is dropped and its analytic bound
    ``C * T**(1 - d) / (d - 1)`` is added to the error estimate, with ``T``
    pushed out until that bound is below ``abs_tol / 10``.

    Returns
    -------
    (value, err_est)
    """
    d = float(decay_exponent)
    if not d > 1:
        raise PreconditionError(
            f"decay exponent {d} <= 1: the characteristic function is not "
            "absolutely integrable"
        )
    if split is None:
        split = 20.0

    def head(t):
        return (phi(t) * complex(math.cos(t * x), -math.sin(t * x))).real

    def truncated():
        c = float(envelope_constant)
        T = max(split, (10.0 * c / ((d - 1.0) * cfg.abs_tol)) ** (1.0 / (d - 1.0)))
        if T > MAX_TRUNCATION:
            raise NonConvergenceError(
                f"Fourier inversion at x={x} needs truncation beyond {MAX_TRUNCATION:g}"
            )
        tail_bound = c * T ** (1.0 - d) / (d - 1.0)
        # the head may be long; break it into geometric pieces
        edges = [0.0, split]
        while edges[-1] < T:
            edges.append(min(T, edges[-1] * 4.0))
        total, err = 0.0, 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            v, e = _quad(head, a, b, cfg)
            total += v
            err += e
        return total / math.pi, (err + tail_bound) / math.pi

    if x == 0.0:
        return truncated()

    w = abs(x)
    sgn = 1.0 if x > 0 else -1.0
    v0, e0 = _quad(head, 0.0, split, cfg)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        cos_part = _spi.quad(
            lambda t: phi(t).real, split, np.inf, weight="cos", wvar=w,
            epsabs=cfg.abs_tol, limlst=200, limit=min(cfg.max_subdivisions, 5000),
            full_output=1,
        )
        sin_part = _spi.quad(
            lambda t: phi(t).imag, split, np.inf, weight="sin", wvar=w,
            epsabs=cfg.abs_tol, limlst=200, limit=min(cfg.max_subdivisions, 5000),
            full_output=1,
        )
    for part in (cos_part, sin_part):
        if len(part) > 3 and not (part[1] <= 100 * cfg.abs_tol):
            # very small |x|: the extrapolation cycles are too long to converge
            return truncated()
    value = v0 + cos_part[0] + sgn * sin_part[0]
    err = e0 + cos_part[1] + sin_part[1]
    return value / math.pi, err / math.pi
