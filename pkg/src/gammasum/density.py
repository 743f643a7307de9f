"""Density of the weighted gamma sum.

Four engines evaluate the density ``p`` of ``S = sum_j sqrt(a_j) X_j``:

``closed``
    exact gamma density, available when all nonzero weights are equal;
``cf_inversion``
    Fourier inversion of the characteristic function (needs
    ``shape * n_effective > 1``);
``convolution``
    sequential numerical convolution of the scaled gamma densities, valid
    for every shape;
``monte_carlo``
    histogram of exact samples, used only as an oracle.

The convolution engine works with the factorization
``p(x) = x**(n*shape - 1) * H(x)`` where ``H`` is smooth and log-convex on
``[0, inf)``; ``log H`` is what gets interpolated between convolution
steps, so the ``x**(shape - 1)`` singularities never touch a grid.
"""

from __future__ import annotations

import cmath
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import interpolate as _spint
from scipy import special as _sps

from . import jsonio
from .errors import ConfigError, IntegrabilityError, PreconditionError
from .model import GammaSumModel
from .numerics import DEFAULT_QUADRATURE, QuadratureConfig, integrate_oscillatory

ENGINES = ("closed", "cf_inversion", "convolution", "monte_carlo")

# engine auto-selection threshold on shape * n_effective
CF_INVERSION_THRESHOLD = 1.1


# --------------------------------------------------------------------------
# closed forms and pointwise bounds
# --------------------------------------------------------------------------

def gamma_density(x, shape: float, scale: float):
    """Gamma(shape) density with the given scale; zero for ``x <= 0``."""
    xx = np.asarray(x, dtype=float)
    out = np.zeros_like(xx)
    pos = xx > 0
    xp = xx[pos]
    out[pos] = np.exp(
        (shape - 1.0) * np.log(xp) - xp / scale - _sps.gammaln(shape) - shape * math.log(scale)
    )
    return float(out) if out.ndim == 0 else out


def density_closed_equal(shape: float, n: int, x):
    """Density of ``sum_{j<=n} X_j / sqrt(n)``.

    ``g(x) = n**(shape*n/2) / Gamma(shape*n) * x**(shape*n - 1) * exp(-x sqrt(n))``.
    """
    if n < 1:
        raise PreconditionError("n must be a positive integer")
    return gamma_density(x, shape * n, 1.0 / math.sqrt(n))


def density_closed(model: GammaSumModel, x):
    """Exact density when every nonzero weight is equal."""
    if not model.equal_weights:
        raise PreconditionError("closed-form density needs equal nonzero weights")
    return gamma_density(x, model.total_shape, float(model.scales[0]))


def _log_prefactor(model: GammaSumModel) -> float:
    # log of Gamma(n*shape)^{-1} (a_1...a_n)^{-shape/2}
    a = model.positive_weights
    return -float(_sps.gammaln(model.total_shape)) - 0.5 * model.shape * float(np.sum(np.log(a)))


def density_bounds_pointwise(model: GammaSumModel, x):
    """Lower and upper bounds on ``p(x)`` from the simplex representation.

    ``upper = x**(n*shape - 1) / Gamma(n*shape) * prod(a)**(-shape/2)`` and
    ``lower = upper * exp(-x / sqrt(a_min))`` where ``n`` counts the
    positive weights and ``a_min`` is the smallest of them.
    """
    xx = np.asarray(x, dtype=float)
    if np.any(xx <= 0):
        raise PreconditionError("pointwise bounds need x > 0")
    log_up = _log_prefactor(model) + (model.total_shape - 1.0) * np.log(xx)
    upper = np.exp(log_up)
    lower = np.exp(log_up - xx / float(model.scales[-1]))
    if upper.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


def fourier_density_bound(shape: float, m: int) -> float:
    """``sqrt(m) Gamma((m*shape - 1)/2) / (2 sqrt(pi) Gamma(m*shape/2))``.

    Bounds the maximal density of every model whose largest normalized
    weight is at most ``1/m``.
    """
    if m < 1 or int(m) != m:
        raise PreconditionError(f"m must be a positive integer, got {m!r}")
    if not m * shape > 1:
        raise PreconditionError(f"Fourier density bound needs m*shape > 1, got {m * shape!r}")
    return math.sqrt(m) * math.exp(
        math.lgamma((m * shape - 1.0) / 2.0) - math.lgamma(m * shape / 2.0)
    ) / (2.0 * math.sqrt(math.pi))


# --------------------------------------------------------------------------
# Fourier inversion
# --------------------------------------------------------------------------

def density_cf_inversion(model: GammaSumModel, x: float,
                         cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Density at ``x`` by Fourier inversion; returns ``(value, err_est)``."""
    d = model.total_shape
    if not d > 1:
        raise IntegrabilityError(
            f"cf inversion needs shape * n_effective > 1 (got {d:g}); "
            "use the convolution or Monte Carlo engine"
        )
    x = float(x)
    if x <= 0:
        return 0.0, 0.0
    s = [float(v) for v in model.scales]
    g = model.shape

    def phi(t):
        acc = 0j
        for sj in s:
            acc += cmath.log(complex(1.0, -sj * t))
        return cmath.exp(-g * acc)

    envelope_const = math.exp(-g * sum(math.log(v) for v in s))
    value, err = integrate_oscillatory(
        phi, x, d, cfg, envelope_constant=envelope_const, split=10.0 / s[-1]
    )
    return value, err


# --------------------------------------------------------------------------
# numerical convolution
# --------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _unit_rule(alpha: float, beta: float, nq: int, dmin: float):
    """Composite rule on [0, 1] for the weight ``u**alpha (1-u)**beta``.

    Gauss-Jacobi panels ``[0, dmin]`` and ``[1 - dmin, 1]`` absorb the
    endpoint singularities; Gauss-Legendre panels graded geometrically
    toward both ends cover the rest. Returns ``(u, 1 - u, log_weight)``.
    """
    xj0, wj0 = _sps.roots_jacobi(nq, 0.0, alpha)
    xj1, wj1 = _sps.roots_jacobi(nq, 0.0, beta)
    xl, wl = _sps.roots_legendre(nq)

    edges = [dmin]
    while edges[-1] * 2.0 < 0.5:
        edges.append(edges[-1] * 2.0)
    left = [0.0] + edges + [0.5]

    us, vs, lws = [], [], []
    # end panel at 0: u = d v, weight v**alpha absorbed by Gauss-Jacobi
    v = (xj0 + 1.0) / 2.0
    u = dmin * v
    us.append(u)
    vs.append(1.0 - u)
    lws.append(np.log(wj0) - (alpha + 1.0) * math.log(2.0)
               + (alpha + 1.0) * math.log(dmin) + beta * np.log1p(-u))
    # interior panels, mirrored around 1/2
    for lo, hi in zip(left[1:-1], left[2:]):
        u = lo + (hi - lo) * (xl + 1.0) / 2.0
        lw = np.log(wl * (hi - lo) / 2.0)
        us.append(u)
        vs.append(1.0 - u)
        lws.append(lw + alpha * np.log(u) + beta * np.log1p(-u))
        # mirror panel [1 - hi, 1 - lo]; keep 1 - u exact
        us.append(1.0 - u)
        vs.append(u)
        lws.append(lw + alpha * np.log1p(-u) + beta * np.log(u))
    v = (xj1 + 1.0) / 2.0
    w = dmin * v
    us.append(1.0 - w)
    vs.append(w)
    lws.append(np.log(wj1) - (beta + 1.0) * math.log(2.0)
               + (beta + 1.0) * math.log(dmin) + alpha * np.log1p(-w))
    return np.concatenate(us), np.concatenate(vs), np.concatenate(lws)


def support_upper(model: GammaSumModel) -> float:
    """Point beyond which the density is negligible (below ~1e-16 relative)."""
    return model.mean + 12.0 * model.std + 36.0 * float(model.scales[0])


class ConvolutionDensity:
    """Density evaluator built by sequential convolution.

    Scales are added in descending order. After ``k`` factors the
    evaluator keeps a quintic spline of ``log H_k`` on a grid that is
    geometric toward zero; the last convolution is evaluated directly at
    the requested points. Two quadrature orders are run for that last step
    and their difference is reported as the error estimate.
    """

    def __init__(self, model: GammaSumModel, x_max: Optional[float] = None,
                 grid_points: int = 400, nq: int = 16):
        self.model = model
        self.shape = model.shape
        self.s = model.scales
        self.n = self.s.size
        self.nq = nq
        self.grid_points = grid_points
        self.log_h0 = _log_prefactor(model)
        self._build(max(x_max or 0.0, support_upper(model)))

    def _log_h1(self, y):
        s1 = self.s[0]
        return -y / s1 - _sps.gammaln(self.shape) - self.shape * math.log(s1)

    def _dmin(self):
        return min(1e-4, 0.25 * float(self.s[-1]) / self.x_max)

    def _build(self, x_max: float):
        self.x_max = x_max
        self._splines = [None, self._log_h1]
        if self.n <= 2:
            return
        y = np.concatenate(([0.0], np.geomspace(1e-3 * float(self.s[-1]), x_max, self.grid_points)))
        dmin = self._dmin()
        for k in range(1, self.n - 1):
            log_h = self._step(k, y, self.nq, dmin)
            # quintic: the log-type terms of log H defeat cubic splines at ~1e-8
            self._splines.append(_spint.make_interp_spline(y, log_h, k=5))

    def _step(self, k: int, x, nq: int, dmin: float):
        """log H_{k+1}(x) from log H_k."""
        g = self.shape
        sk = float(self.s[k])
        u, v, lw = _unit_rule(k * g - 1.0, g - 1.0, nq, dmin)
        xx = np.asarray(x, dtype=float)[:, None]
        val = self._splines[k](xx * u[None, :]) - xx * v[None, :] / sk + lw[None, :]
        # plain log-sum-exp; scipy's version carries heavy per-call overhead here
        top = val.max(axis=1)
        lse = top + np.log(np.exp(val - top[:, None]).sum(axis=1))
        return lse - _sps.gammaln(g) - g * math.log(sk)

    def log_h(self, x, nq: Optional[int] = None):
        """``log H_n(x)`` with ``p(x) = x**(n*shape - 1) * H_n(x)``."""
        xx = np.atleast_1d(np.asarray(x, dtype=float))
        if xx.size and xx.max() > self.x_max:
            self._build(1.5 * xx.max())
        if self.n == 1:
            return self._log_h1(xx)
        return self._step(self.n - 1, xx, nq or self.nq, self._dmin())

    def evaluate(self, x):
        """Density values and error estimates at ``x`` (array)."""
        xx = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(xx)
        err = np.zeros_like(xx)
        pos = xx > 0
        if not np.any(pos):
            return out, err
        xp = xx[pos]
        power = (self.shape * self.n - 1.0) * np.log(xp)
        fine = self.log_h(xp)
        vals = np.exp(power + fine)
        if self.n > 1:
            coarse = np.exp(power + self.log_h(xp, nq=self.nq - 4))
            # relative floor covers spline interpolation of log H (observed <= 1e-10)
            e = np.abs(vals - coarse) + 1e-9 * vals
        else:
            e = 1e-15 * vals
        out[pos] = vals
        err[pos] = e
        return out, err

    def __call__(self, x):
        """Density values only (no second quadrature order)."""
        xx = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xx)
        out = np.zeros_like(flat)
        pos = flat > 0
        if np.any(pos):
            xp = flat[pos]
            out[pos] = np.exp((self.shape * self.n - 1.0) * np.log(xp) + self.log_h(xp))
        return float(out[0]) if xx.ndim == 0 else out


# --------------------------------------------------------------------------
# curves, sampling and the engine dispatcher
# --------------------------------------------------------------------------

@dataclass
class DensityCurve:
    """Density values on an ascending grid, tagged with the engine used."""

    grid: np.ndarray
    values: np.ndarray
    engine: str
    err_est: np.ndarray
    shape: float = float("nan")
    weights: tuple = field(default=())
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.err_est = np.broadcast_to(np.asarray(self.err_est, dtype=float), self.grid.shape).copy()
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.grid.shape != self.values.shape:
            raise ConfigError("grid and values differ in length")

    def mass(self) -> float:
        """Trapezoid mass over the covered grid."""
        return float(np.trapezoid(self.values, self.grid))

    def argmax(self):
        i = int(np.argmax(self.values))
        return float(self.grid[i]), float(self.values[i])

    def header(self) -> dict:
        """JSON header; ``meta`` entries (e.g. a run config) follow the core keys."""
        return {"shape": self.shape, "weights": list(self.weights), "engine": self.engine, **self.meta}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(jsonio.encode(self.header())) + "\n")
        buf.write("x,density,err_est\n")
        for x, p, e in zip(self.grid, self.values, self.err_est):
            buf.write(f"{float(x)!r},{float(p)!r},{float(e)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DensityCurve":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# "):
            raise ConfigError("density CSV lacks its JSON header line")
        head = jsonio.decode(json.loads(lines[0][2:]))
        if lines[1].strip() != "x,density,err_est":
            raise ConfigError("density CSV has an unexpected column header")
        rows = [tuple(float(v) for v in ln.split(",")) for ln in lines[2:] if ln.strip()]
        arr = np.array(rows, dtype=float).reshape(-1, 3)
        meta = {k: v for k, v in head.items() if k not in ("shape", "weights", "engine")}
        return cls(arr[:, 0], arr[:, 1], head["engine"], arr[:, 2],
                   shape=head["shape"], weights=tuple(head["weights"]), meta=meta)


def sample(model: GammaSumModel, count: int, rng_seed) -> np.ndarray:
    """``count`` i.i.d. draws of ``S``; deterministic given ``rng_seed``.

    For shape < 1 each gamma variate is drawn as
    ``Gamma(shape + 1) * U**(1/shape)``.
    """
    if count < 1:
        raise PreconditionError("count must be >= 1")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    g = model.shape
    out = np.zeros(int(count))
    for sj in model.scales:
        if g < 1.0:
            x = rng.standard_gamma(g + 1.0, size=count) * rng.random(count) ** (1.0 / g)
        else:
            x = rng.standard_gamma(g, size=count)
        out += sj * x
    return out


def quantiles(model: GammaSumModel, probs, rng_seed=0, count: int = 10**5) -> np.ndarray:
    """Monte Carlo quantiles, used only to place grids."""
    return np.quantile(sample(model, count, rng_seed), probs)


def default_grid(model: GammaSumModel, count: int = 4096,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    """Grid graded toward 0 below the bulk and linear above it.

    The graded part uses ``x = x_b * (i / m)**r`` with
    ``r = max(1, 1/shape) * cfg.singularity_grading``; the grid ends at
    ``mean + 12 std``.
    """
    hi = model.mean + 12.0 * model.std
    x_b = max(model.mean - model.std, 0.25 * model.std)
    m = count // 4
    r = max(1.0, 1.0 / model.shape) * cfg.singularity_grading
    graded = x_b * (np.arange(1, m + 1) / m) ** r
    linear = np.linspace(x_b, hi, count - m + 1)[1:]
    return np.concatenate((graded, linear))


def select_engine(model: GammaSumModel) -> str:
    """Engine policy: closed form, then cf inversion, then convolution."""
    if model.n_effective == 1 or model.equal_weights:
        return "closed"
    if model.total_shape > CF_INVERSION_THRESHOLD:
        return "cf_inversion"
    return "convolution"


def grid_engine(model: GammaSumModel) -> str:
    """Engine for workloads that need many evaluations (entropies, maxima)."""
    if model.n_effective == 1 or model.equal_weights:
        return "closed"
    return "convolution"


def density_convolution(model: GammaSumModel, grid,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> DensityCurve:
    """Density on ``grid`` from the sequential convolution engine."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ConfigError("grid must be nonempty and strictly ascending")
    if model.total_shape < 1.0 and grid[0] > 1e-3 * model.std:
        warnings.warn(
            "density diverges at 0 (shape * n_effective < 1) but the grid does not "
            "refine toward 0",
            RuntimeWarning,
            stacklevel=2,
        )
    dens = ConvolutionDensity(model, x_max=float(grid.max()))
    values, err = dens.evaluate(grid)
    return DensityCurve(grid, values, "convolution", err,
                        shape=model.shape, weights=tuple(model.weights.a))


def density_monte_carlo(model: GammaSumModel, grid, count: int = 10**6,
                        rng_seed=0) -> DensityCurve:
    """Histogram estimate at the grid points (bins split at midpoints)."""
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ConfigError("grid must have at least two strictly ascending points")
    mids = (grid[1:] + grid[:-1]) / 2.0
    edges = np.concatenate(([grid[0] - (mids[0] - grid[0])], mids,
                            [grid[-1] + (grid[-1] - mids[-1])]))
    draws = sample(model, count, rng_seed)
    counts, _ = np.histogram(draws, bins=edges)
    width = np.diff(edges)
    values = counts / (count * width)
    err = np.sqrt(np.maximum(counts, 1.0)) / (count * width)
    return DensityCurve(grid, values, "monte_carlo", err,
                        shape=model.shape, weights=tuple(model.weights.a))


def density_curve(model: GammaSumModel, grid, engine: Optional[str] = None,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE,
                  rng_seed=0) -> DensityCurve:
    """Density on ``grid`` using ``engine`` (``None`` applies the policy)."""
    engine = engine or select_engine(model)
    grid = np.asarray(grid, dtype=float)
    meta = dict(shape=model.shape, weights=tuple(model.weights.a))
    if engine == "closed":
        values = density_closed(model, grid)
        return DensityCurve(grid, values, "closed", 1e-15 * np.abs(values), **meta)
    if engine == "cf_inversion":
        pairs = [density_cf_inversion(model, x, cfg) for x in grid]
        values = np.array([p[0] for p in pairs])
        err = np.array([p[1] for p in pairs])
        return DensityCurve(grid, values, "cf_inversion", err, **meta)
    if engine == "convolution":
        return density_convolution(model, grid, cfg)
    if engine == "monte_carlo":
        return density_monte_carlo(model, grid, rng_seed=rng_seed)
    raise ConfigError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def density_function(model: GammaSumModel, engine: Optional[str] = None,
                     cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Scalar-or-array callable ``p`` for quadrature and optimization.

    ``engine=None`` picks :func:`grid_engine`, since callers of this
    function evaluate the density many times.
    """
    engine = engine or grid_engine(model)
    if engine == "closed":
        if not model.equal_weights:
            raise PreconditionError("closed-form density needs equal nonzero weights")
        shape, scale = model.total_shape, float(model.scales[0])
        return lambda x: gamma_density(x, shape, scale)
    if engine == "convolution":
        return ConvolutionDensity(model)
    if engine == "cf_inversion":
        if not model.total_shape > 1:
            raise IntegrabilityError(
                f"cf inversion needs shape * n_effective > 1 (got {model.total_shape:g})"
            )

        def p(x):
            xx = np.asarray(x, dtype=float)
            if xx.ndim == 0:
                return density_cf_inversion(model, float(xx), cfg)[0]
            return np.array([density_cf_inversion(model, float(v), cfg)[0] for v in xx])

        return p
    raise ConfigError(f"engine {engine!r} cannot back a density function")


def log_density_function(model: GammaSumModel, engine: Optional[str] = None,
                         cfg: QuadratureConfig = DEFAULT_QUADRATURE):
    """Callable ``log p`` (``-inf`` where ``p`` vanishes); vectorized.

    The closed and convolution engines work in the log domain throughout,
    so far tails keep their relative accuracy.
    """
    engine = engine or grid_engine(model)
    power = model.total_shape - 1.0
    if engine == "closed":
        if not model.equal_weights:
            raise PreconditionError("closed-form density needs equal nonzero weights")
        k, scale = model.total_shape, float(model.scales[0])
        const = -float(_sps.gammaln(k)) - k * math.log(scale)

        def core(xp):
            return power * np.log(xp) - xp / scale + const
    elif engine == "convolution":
        conv = ConvolutionDensity(model)

        def core(xp):
            return power * np.log(xp) + conv.log_h(xp)
    else:
        p = density_function(model, engine, cfg)

        def core(xp):
            with np.errstate(divide="ignore"):
                return np.log(np.maximum(np.asarray(p(xp), dtype=float), 0.0))

    def log_p(x):
        xx = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xx)
        out = np.full(flat.shape, -np.inf)
        pos = flat > 0
        if np.any(pos):
            out[pos] = core(flat[pos])
        return float(out[0]) if xx.ndim == 0 else out

    log_p.engine = engine
    return log_p
