"""Shannon and Renyi entropies, the maximal density and non-Gaussianity.

All integrals run over ``(0, inf)`` in the log domain: the density engine
supplies ``log p`` and integrands are assembled as ``exp(...)`` of sums, so
the ``x**(n*shape - 1)`` behaviour at 0 and the exponential tail never
underflow prematurely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .density import _log_prefactor, grid_engine, log_density_function, support_upper
from .errors import DivergenceError, PreconditionError
from .model import GammaSumModel
from .numerics import DEFAULT_QUADRATURE, QuadratureConfig, digamma, integrate, log_gamma

MAX_FINITE_ORDER = 64.0
SCAN_POINTS = 512
GOLDEN_RTOL = 1e-8
# relative accuracy of the grid engines (closed: rounding, convolution: spline of log H)
ENGINE_REL_ERR = {"closed": 1e-15, "convolution": 1e-9, "cf_inversion": 1e-8}


@dataclass(frozen=True)
class EntropyResult:
    """One entropy value in nats, tagged with its order and engine."""

    order: float
    value: float
    err_est: float
    engine: str

    def to_dict(self) -> dict:
        return {"order": self.order, "value": self.value, "err_est": self.err_est,
                "engine": self.engine}


@dataclass(frozen=True)
class MaxDensity:
    """Supremum ``M`` of the density (``inf`` allowed) and where it sits."""

    value: float
    argmax: float
    err_est: float
    engine: str

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def __iter__(self):
        # unpacks as (M, argmax)
        return iter((self.value, self.argmax))

    def to_dict(self) -> dict:
        return {"value": self.value, "argmax": self.argmax, "err_est": self.err_est,
                "engine": self.engine}


# --------------------------------------------------------------------------
# closed-form oracles for gamma densities
# --------------------------------------------------------------------------

def gamma_shannon_entropy(shape: float, scale: float = 1.0) -> float:
    """``k + ln Gamma(k) + (1 - k) psi(k) + ln scale`` for Gamma(k, scale)."""
    k = shape
    return k + log_gamma(k) + (1.0 - k) * digamma(k) + math.log(scale)


def gamma_renyi_entropy(shape: float, alpha: float, scale: float = 1.0) -> float:
    """Renyi entropy of order ``alpha`` of Gamma(k, scale).

    With ``p = alpha (k - 1) + 1`` one has
    ``int f**alpha = Gamma(p) scale**(1 - alpha) / (Gamma(k)**alpha alpha**p)``.
    """
    k = shape
    if alpha == 1:
        return gamma_shannon_entropy(k, scale)
    p = alpha * (k - 1.0) + 1.0
    if not p > 0:
        raise DivergenceError(f"order {alpha} diverges for shape {k}", value=-math.inf)
    log_int = log_gamma(p) - alpha * log_gamma(k) - p * math.log(alpha)
    return log_int / (1.0 - alpha) + math.log(scale)


def uniform_shannon_entropy(shape: float, n: int) -> float:
    """Entropy of ``sum_{j<=n} X_j / sqrt(n)``."""
    return gamma_shannon_entropy(n * shape, 1.0 / math.sqrt(n))


def uniform_renyi_entropy(shape: float, n: int, alpha: float) -> float:
    """Renyi entropy of ``sum_{j<=n} X_j / sqrt(n)``."""
    return gamma_renyi_entropy(n * shape, alpha, 1.0 / math.sqrt(n))


def gaussian_entropy(variance: float) -> float:
    return 0.5 * math.log(2.0 * math.pi * math.e * variance)


# --------------------------------------------------------------------------
# maximal density
# --------------------------------------------------------------------------

def _scan_grid(model: GammaSumModel) -> np.ndarray:
    hi = model.mean + 12.0 * model.std
    lo = 1e-6 * float(model.scales[-1])
    geo = np.geomspace(lo, hi, SCAN_POINTS // 2)
    lin = np.linspace(0.0, hi, SCAN_POINTS // 2 + 1)[1:]
    return np.unique(np.concatenate((geo, lin)))


def _golden_max(f, lo: float, hi: float, rtol: float = GOLDEN_RTOL):
    """Golden-section search for the maximum of a unimodal ``f`` on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > rtol * max(abs(c), abs(d), 1e-300):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _interior_max(log_p, model: GammaSumModel):
    """Coarse scan plus golden-section refinement of ``log p``."""
    x = _scan_grid(model)
    lp = log_p(x)
    i = int(np.argmax(lp))
    lo = x[i - 1] if i > 0 else 0.0
    hi = x[min(i + 1, x.size - 1)]
    xs, ls = _golden_max(lambda t: float(log_p(t)) if t > 0 else -math.inf, lo, hi)
    if lp[i] > ls:
        xs, ls = float(x[i]), float(lp[i])
    return float(xs), float(ls)


def max_density(model: GammaSumModel, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                engine: Optional[str] = None, log_p=None) -> MaxDensity:
    """``M = sup p`` and its location.

    ``M = inf`` iff ``n_effective * shape < 1``. When the product equals 1
    the supremum is the limit ``p(0+) = prod(a)**(-shape/2)``; above 1 the
    density vanishes at 0 and ``M`` is found by scanning ``(0, mean + 12 std]``
    and refining the best grid point by golden-section search.
    """
    ns = model.total_shape
    engine = engine or (log_p.engine if log_p is not None else grid_engine(model))
    if ns < 1.0 - 1e-12:
        return MaxDensity(math.inf, 0.0, 0.0, engine)
    if abs(ns - 1.0) <= 1e-12:
        m = math.exp(_log_prefactor(model))
        return MaxDensity(m, 0.0, 1e-15 * m, engine)
    if engine == "closed" and log_p is None:
        k, scale = ns, float(model.scales[0])
        mode = (k - 1.0) * scale
        m = math.exp((k - 1.0) * math.log(mode) - mode / scale - log_gamma(k) - k * math.log(scale))
        return MaxDensity(m, mode, 1e-15 * m, engine)
    if log_p is None:
        log_p = log_density_function(model, engine, cfg)
    xs, ls = _interior_max(log_p, model)
    m = math.exp(ls)
    return MaxDensity(m, xs, ENGINE_REL_ERR.get(engine, 1e-8) * m, engine)


# --------------------------------------------------------------------------
# entropies
# --------------------------------------------------------------------------

def _break_points(model: GammaSumModel, mode: float):
    pts = [model.mean + 4.0 * model.std]
    if mode > 0:
        pts.append(mode)
    else:
        pts.append(max(model.mean - model.std, 0.25 * model.mean))
    return sorted(set(pts))


def _log_integral(log_p, model: GammaSumModel, alpha: float, shift: float,
                  mode: float, cfg: QuadratureConfig):
    """``int (p * exp(-shift))**alpha`` over (0, support_upper) and its error."""
    beta = alpha * (model.total_shape - 1.0)

    def f(x):
        if x <= 0:
            return 0.0
        return math.exp(alpha * (float(log_p(x)) - shift))

    sing = beta if beta < 1.0 else None
    return integrate(f, 0.0, support_upper(model), cfg, singularity=sing,
                     points=_break_points(model, mode))


def shannon_entropy(model: GammaSumModel, cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                    engine: Optional[str] = None, log_p=None) -> EntropyResult:
    """``-int p ln p`` with the substitution ``u = x**(n*shape)`` near 0
    when ``n * shape < 2`` and a break at the mode."""
    if log_p is None:
        log_p = log_density_function(model, engine, cfg)
    engine = log_p.engine
    md = max_density(model, cfg, log_p=log_p)
    ns = model.total_shape

    def f(x):
        if x <= 0:
            return 0.0
        lp = float(log_p(x))
        return -math.exp(lp) * lp if lp > -745.0 else 0.0

    value, err = integrate(f, 0.0, support_upper(model), cfg,
                           singularity=(ns - 1.0) if ns < 2.0 else None,
                           points=_break_points(model, md.argmax))
    err += ENGINE_REL_ERR.get(engine, 1e-8) * (abs(value) + 1.0)
    return EntropyResult(1.0, value, err, engine)


def renyi_entropy(model: GammaSumModel, alpha: float,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                  engine: Optional[str] = None, log_p=None) -> EntropyResult:
    """``(1 - alpha)**-1 ln int p**alpha`` for ``alpha`` in (0, 64] or ``inf``.

    For ``alpha > 1`` the integral is finite iff
    ``alpha * (n_effective * shape - 1) + 1 > 0``; otherwise
    :class:`DivergenceError` is raised with ``value = -inf``. ``alpha = inf``
    gives ``-ln M``.
    """
    alpha = float(alpha)
    if alpha == 1.0:
        raise PreconditionError("order 1 is the Shannon entropy; call shannon_entropy")
    if not (alpha > 0 and (alpha <= MAX_FINITE_ORDER or math.isinf(alpha))):
        raise PreconditionError(f"order must lie in (0, {MAX_FINITE_ORDER:g}] or be inf, got {alpha!r}")
    if log_p is None:
        log_p = log_density_function(model, engine, cfg)
    engine = log_p.engine
    ns = model.total_shape
    if math.isinf(alpha):
        md = max_density(model, cfg, log_p=log_p)
        if not md.finite:
            raise DivergenceError("maximal density is infinite", value=-math.inf)
        return EntropyResult(math.inf, 0.0 - math.log(md.value), md.err_est / md.value, engine)
    if not alpha * (ns - 1.0) + 1.0 > 0:
        raise DivergenceError(
            f"int p**alpha diverges at 0: alpha*(n*shape - 1) + 1 = {alpha * (ns - 1.0) + 1.0:g} <= 0",
            value=-math.inf,
        )
    md = max_density(model, cfg, log_p=log_p)
    if md.finite:
        shift, mode = math.log(md.value), md.argmax
    else:
        x = _scan_grid(model)
        shift, mode = float(np.max(log_p(x))), 0.0
    integral, err = _log_integral(log_p, model, alpha, shift, mode, cfg)
    value = (alpha * shift + math.log(integral)) / (1.0 - alpha)
    rel = err / integral + alpha * ENGINE_REL_ERR.get(engine, 1e-8)
    return EntropyResult(alpha, value, rel / abs(1.0 - alpha), engine)


def entropy(model: GammaSumModel, alpha: float = 1.0,
            cfg: QuadratureConfig = DEFAULT_QUADRATURE,
            engine: Optional[str] = None, log_p=None) -> EntropyResult:
    """Dispatch on the order: 0 (support, always ``+inf``), 1 (Shannon),
    ``inf`` (``-ln M``) or a finite Renyi order."""
    alpha = float(alpha)
    if alpha == 0.0:
        # the support is (0, inf) for every model
        return EntropyResult(0.0, math.inf, 0.0, "support")
    if alpha == 1.0:
        return shannon_entropy(model, cfg, engine, log_p)
    return renyi_entropy(model, alpha, cfg, engine, log_p)


def relative_entropy_to_gaussian(model: GammaSumModel,
                                 cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                                 engine: Optional[str] = None) -> EntropyResult:
    """``D(S || G) = h(G) - h(S)`` for a Gaussian ``G`` of the same variance."""
    h = shannon_entropy(model, cfg, engine)
    return EntropyResult(1.0, gaussian_entropy(model.variance) - h.value, h.err_est, h.engine)
