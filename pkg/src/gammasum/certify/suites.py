"""Property suites and the deterministic runner.

Every suite turns a setting (a dict of fixed parameters) and a random
generator into fully explicit case inputs, and evaluates one input dict
into ``lhs``, ``rhs``, ``margin`` and a case tolerance. Inputs are drawn
serially from ``default_rng([seed, crc32(suite), setting, trial])`` before
any evaluation, so results do not depend on ``jobs`` and every case can be
replayed from its inputs alone.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional

import numpy as np

from ..density import (
    ConvolutionDensity,
    density_bounds_pointwise,
    density_closed,
    fourier_density_bound,
    grid_engine,
    log_density_function,
)
from ..entropy import (
    max_density,
    renyi_entropy,
    shannon_entropy,
    uniform_renyi_entropy,
    uniform_shannon_entropy,
)
from ..errors import ConfigError, DivergenceError, GammaSumError, PreconditionError, RegimeError
from ..model import GammaSumModel, is_majorized, random_majorization_pair, random_simplex_point, schur_ostrowski_check
from ..numerics import DEFAULT_QUADRATURE, QuadratureConfig
from ..transforms import central_moments, cf_envelope, cf_modulus
from . import bounds
from .functionals import (
    ExponentialMixture,
    F,
    G,
    centred_domain_limit,
    centred_expectation,
    centred_margin,
    grad_log_F,
    grad_log_G,
    log_F,
    log_G,
    uncentred_expectation,
    uncentred_finite,
    uncentred_margin,
)
from .report import CertificateReport, case_passes

QUADRATURE_TOL = 1e-7
EXACT_TOL = 1e-10
CLOSED_TOL = 1e-9
SPIKES = (0.5, 0.9, 0.99)
POWER_FAMILY = (0.1, 0.5, 1.0, 2.0)


# --------------------------------------------------------------------------
# sampling helpers
# --------------------------------------------------------------------------

def spiked_simplex_point(n: int, a1: float, rng: np.random.Generator) -> np.ndarray:
    """``a_1`` fixed, the rest Dirichlet(1) scaled to ``1 - a_1`` (needs a_1 >= 1/2)."""
    rest = rng.dirichlet(np.ones(n - 1)) * (1.0 - a1)
    return np.concatenate(([a1], rest))


def simplex_draw(n: int, rng: np.random.Generator, zero_prob: float = 0.0,
                 spike_prob: float = 0.25) -> np.ndarray:
    """Descending simplex point: Dirichlet(1) or, with ``spike_prob``, spiked."""
    if n > 1 and rng.random() < spike_prob:
        a = spiked_simplex_point(n, float(rng.choice(SPIKES)), rng)
    else:
        a = random_simplex_point(n, 1.0, rng, zero_prob=zero_prob)
    return np.sort(a)[::-1]


def _model(shape, a) -> GammaSumModel:
    return GammaSumModel.of(shape, a)


def _max_density(shape, a, cfg):
    model = _model(shape, a)
    return max_density(model, cfg, log_p=log_density_function(model, None, cfg))


def _finite_max_density(shape, a, cfg):
    md = _max_density(shape, a, cfg)
    if not md.finite:
        raise RegimeError(f"maximal density is infinite for shape={shape!r}, a={list(a)!r}")
    return md


def _result(lhs, rhs, margin, tolerance, tag="", **extra):
    out = {"lhs": lhs, "rhs": rhs, "margin": float(margin), "tolerance": float(tolerance), "tag": tag}
    out.update(extra)
    return out


def _as_list(v):
    return [float(x) for x in v]


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

class Suite:
    name = ""
    description = ""

    def settings(self) -> List[dict]:
        return [{}]

    def check_setting(self, setting: dict) -> None:
        pass

    def pinned(self) -> List[dict]:
        return []

    def draw(self, setting: dict, rng: np.random.Generator) -> List[dict]:
        raise NotImplementedError

    def evaluate(self, inputs: dict, cfg: QuadratureConfig) -> dict:
        raise NotImplementedError

    def summarize(self, cases: List[dict]) -> dict:
        return {}


class PhiSuite(Suite):
    name = "phi"
    description = "E Phi(c + S - E S) is Schur-concave on the simplex sum(a) < c^2/(shape^2 n)"

    def settings(self):
        return [{"shape": g} for g in (0.5, 1.0, 2.0)]

    def pinned(self):
        one = ExponentialMixture.single(1.0).to_dict()
        return [
            {"shape": 1.0, "c": 3.0, "a": [2.0, 0.0], "b": [1.0, 1.0], "mixture": one},
            {"shape": 1.0, "c": 3.0, "a": [1.5, 0.5], "b": [1.5, 0.5], "mixture": one},
        ]

    def draw(self, setting, rng):
        g = setting["shape"]
        n = int(rng.integers(2, 7))
        c = float(10.0 ** rng.uniform(math.log10(0.5), math.log10(5.0)))
        total = centred_domain_limit(g, n, c) * float(rng.uniform(0.05, 0.999))
        pair = random_majorization_pair(n, total, rng)
        mixtures = [ExponentialMixture.random(rng)] + [ExponentialMixture.power_law(q) for q in POWER_FAMILY]
        return [
            {"shape": g, "c": c, "a": _as_list(pair.upper), "b": _as_list(pair.lower), "mixture": m.to_dict()}
            for m in mixtures
        ]

    def evaluate(self, inputs, cfg):
        g, c = inputs["shape"], inputs["c"]
        a, b = np.array(inputs["a"]), np.array(inputs["b"])
        mix = ExponentialMixture.from_dict(inputs["mixture"])
        if not is_majorized(a, b):
            raise PreconditionError("phi case inputs are not a majorization pair")
        lhs, ea = centred_expectation(mix, g, a, c, cfg)
        rhs, eb = centred_expectation(mix, g, b, c, cfg)
        margin, em = centred_margin(mix, g, a, b, c, cfg)
        return _result(lhs, rhs, margin, CLOSED_TOL + em, mix.tag, err_est=ea + eb + em)


class Phi0Suite(Suite):
    name = "phi0"
    description = "E Phi(S) is Schur-convex on the whole orthant"

    def settings(self):
        return [{"shape": g} for g in (0.5, 1.0, 2.0)]

    def pinned(self):
        one = ExponentialMixture.single(1.0).to_dict()
        return [
            {"shape": 1.0, "a": [2.0, 0.0], "b": [1.0, 1.0], "mixture": one},
            {"shape": 1.0, "a": [1.0], "b": [1.0], "mixture": one},
        ]

    def draw(self, setting, rng):
        g = setting["shape"]
        n = int(rng.integers(2, 7))
        total = float(10.0 ** rng.uniform(-2.0, 2.0))
        pair = random_majorization_pair(n, total, rng)
        a, b = _as_list(pair.upper), _as_list(pair.lower)
        atoms = ExponentialMixture.random(rng)
        mixtures = [atoms] + [ExponentialMixture.power_law(q) for q in POWER_FAMILY]
        cases = [{"shape": g, "a": a, "b": b, "mixture": m.to_dict()} for m in mixtures]
        # the uniform vector is the minimal element of its sum class
        uniform = [math.fsum(a) / n] * n
        cases.append({"shape": g, "a": a, "b": uniform, "mixture": atoms.to_dict(), "tag": "uniform"})
        return cases

    def evaluate(self, inputs, cfg):
        g = inputs["shape"]
        a, b = np.array(inputs["a"]), np.array(inputs["b"])
        mix = ExponentialMixture.from_dict(inputs["mixture"])
        tag = inputs.get("tag", mix.tag)
        if not is_majorized(a, b):
            raise PreconditionError("phi0 case inputs are not a majorization pair")
        if not uncentred_finite(mix, g, a):
            return _result(math.inf, None, math.inf, CLOSED_TOL, tag + " trivial: lhs diverges")
        lhs, ea = uncentred_expectation(mix, g, a, cfg)
        rhs, eb = uncentred_expectation(mix, g, b, cfg)
        if not math.isfinite(rhs):
            return _result(lhs, rhs, -math.inf, CLOSED_TOL, tag)
        margin, em = uncentred_margin(mix, g, a, b, cfg)
        return _result(lhs, rhs, margin, CLOSED_TOL + em, tag, err_est=ea + eb + em)


class FGSuite(Suite):
    name = "fg"
    description = "F is Schur-concave and G Schur-convex on the orthant; Schur-Ostrowski signs"

    def settings(self):
        return [{"shape": g} for g in (0.5, 1.0, 2.0)]

    def pinned(self):
        return [
            {"check": "F", "shape": 1.0, "x": [2.0, 0.0], "y": [1.0, 1.0]},
            {"check": "G", "shape": 1.0, "x": [2.0, 0.0], "y": [1.0, 1.0]},
            {"check": "F-ostrowski", "shape": 2.0, "x": [1.0, 4.0], "i": 0, "j": 1},
            {"check": "G-ostrowski", "shape": 2.0, "x": [1.0, 4.0], "i": 0, "j": 1},
        ]

    def draw(self, setting, rng):
        g = setting["shape"]
        n = int(rng.integers(2, 7))
        total = float(10.0 ** rng.uniform(-2.0, 2.0))
        pair = random_majorization_pair(n, total, rng)
        x, y = _as_list(pair.upper), _as_list(pair.lower)
        point = (10.0 ** rng.uniform(-2.0, 1.0, size=n)).tolist()
        i, j = (int(v) for v in rng.choice(n, size=2, replace=False))
        return [
            {"check": "F", "shape": g, "x": x, "y": y},
            {"check": "G", "shape": g, "x": x, "y": y},
            {"check": "F-ostrowski", "shape": g, "x": point, "i": i, "j": j},
            {"check": "G-ostrowski", "shape": g, "x": point, "i": i, "j": j},
        ]

    def evaluate(self, inputs, cfg):
        g, check = inputs["shape"], inputs["check"]
        x = np.array(inputs["x"])
        if check in ("F", "G"):
            y = np.array(inputs["y"])
            if not is_majorized(x, y):
                raise PreconditionError("fg case inputs are not a majorization pair")
            if check == "F":
                # relative margin 1 - F(x)/F(y) >= 0
                margin = -math.expm1(log_F(g, x) - log_F(g, y))
                return _result(F(g, x), F(g, y), margin, CLOSED_TOL, "F concave")
            margin = -math.expm1(log_G(g, y) - log_G(g, x))
            return _result(G(g, x), G(g, y), margin, CLOSED_TOL, "G convex")
        i, j = inputs["i"], inputs["j"]
        if check == "F-ostrowski":
            fun, grad, sign = F, grad_log_F, -1.0
        elif check == "G-ostrowski":
            fun, grad, sign = G, grad_log_G, 1.0
        else:
            raise ConfigError(f"unknown fg check {check!r}")
        fx = fun(g, x)
        gr = grad(g, x)
        fd = schur_ostrowski_check(lambda v: fun(g, v), x, i, j)
        analytic = fx * (x[i] - x[j]) * (gr[i] - gr[j])
        scale = fx * abs(x[i] - x[j]) * max(abs(gr[i]), abs(gr[j]))
        return _result(fd, analytic, sign * fd / scale, CLOSED_TOL, f"{check} sign {int(sign):+d}")


class MomentsSuite(Suite):
    name = "moments"
    description = "central moments are nonnegative and Schur-convex in the weights"

    def settings(self):
        return [{"shape": g, "max_order": 12} for g in (0.5, 1.0, 2.0)]

    def check_setting(self, setting):
        if setting.get("max_order", 12) > 20:
            raise PreconditionError("moment suite supports orders up to 20")

    def pinned(self):
        return [
            {"check": "table", "shape": 1.0, "a": [1.0], "expected": [1.0, 0.0, 1.0, 2.0, 9.0]},
            {"check": "pair", "shape": 1.0, "a": [1.0, 0.0], "b": [0.5, 0.5], "max_order": 3},
        ]

    def draw(self, setting, rng):
        n = int(rng.integers(2, 7))
        pair = random_majorization_pair(n, 1.0, rng)
        return [{"check": "pair", "shape": setting["shape"], "a": _as_list(pair.upper),
                 "b": _as_list(pair.lower), "max_order": setting["max_order"]}]

    def evaluate(self, inputs, cfg):
        g = inputs["shape"]
        if inputs["check"] == "table":
            want = inputs["expected"]
            got = central_moments(_model(g, inputs["a"]), len(want) - 1).central_moments
            margin = -max(abs(u - v) / max(1.0, abs(v)) for u, v in zip(got, want))
            return _result(list(got), want, margin, EXACT_TOL, "pinned table")
        K = inputs["max_order"]
        if K > 20:
            raise PreconditionError("moment suite supports orders up to 20")
        ma = central_moments(_model(g, inputs["a"]), K).central_moments
        mb = central_moments(_model(g, inputs["b"]), K).central_moments
        margins = []
        for k in range(2, K + 1):
            scale = max(1.0, abs(ma[k]))
            margins.append((ma[k] - mb[k]) / scale)
            margins.append(mb[k] / max(1.0, abs(mb[k])))
        return _result(list(ma), list(mb), min(margins), EXACT_TOL, f"orders 2..{K}")


class EntropySuite(Suite):
    name = "entropy"
    description = "h(sum sqrt(a_j) X_j) <= h(sum X_j / sqrt(n)) on the simplex when shape * n >= 1"

    def settings(self):
        return [{"shape": 1.0, "n": 2}, {"shape": 0.5, "n": 3}, {"shape": 1.5, "n": 3}]

    def check_setting(self, setting):
        if setting["shape"] * setting["n"] < 1:
            raise PreconditionError("entropy comparison needs shape * n >= 1")

    def pinned(self):
        return [{"shape": 1.0, "n": 2, "a": [1.0, 0.0]}, {"shape": 1.0, "n": 2, "a": [0.5, 0.5]}]

    def draw(self, setting, rng):
        a = simplex_draw(setting["n"], rng, zero_prob=0.1)
        return [{"shape": setting["shape"], "n": setting["n"], "a": _as_list(a)}]

    def evaluate(self, inputs, cfg):
        g, n = inputs["shape"], inputs["n"]
        self.check_setting(inputs)
        rhs = uniform_shannon_entropy(g, n)
        h = shannon_entropy(_model(g, inputs["a"]), cfg)
        return _result(h.value, rhs, rhs - h.value, QUADRATURE_TOL + h.err_est, h.engine,
                       err_est=h.err_est)


class RenyiSuite(Suite):
    name = "renyi"
    description = "h_alpha(weighted) <= h_alpha(uniform) for alpha > 1, shape * n < 1"

    def settings(self):
        return [{"shape": 0.4, "n": 2, "alpha": 2.0}, {"shape": 0.45, "n": 2, "alpha": 1.5}]

    def check_setting(self, setting):
        g, n, al = setting["shape"], setting["n"], setting["alpha"]
        if not al > 1:
            raise PreconditionError("Renyi comparison needs alpha > 1")
        if not n * g < 1:
            raise PreconditionError("Renyi comparison needs shape * n < 1")
        if not al * (n * g - 1.0) + 1.0 > 0:
            raise PreconditionError(
                f"uniform comparison point has infinite order-{al:g} integral: "
                f"alpha*(n*shape - 1) + 1 = {al * (n * g - 1.0) + 1.0:g} <= 0"
            )

    def pinned(self):
        return [{"shape": 0.4, "n": 2, "alpha": 2.0, "a": [0.5, 0.5]}]

    def draw(self, setting, rng):
        a = simplex_draw(setting["n"], rng, zero_prob=0.1)
        return [dict(setting, a=_as_list(a))]

    def evaluate(self, inputs, cfg):
        self.check_setting(inputs)
        g, n, al = inputs["shape"], inputs["n"], inputs["alpha"]
        rhs = uniform_renyi_entropy(g, n, al)
        try:
            h = renyi_entropy(_model(g, inputs["a"]), al, cfg)
        except DivergenceError:
            return _result(-math.inf, rhs, math.inf, QUADRATURE_TOL, "trivial: lhs diverges to -inf")
        return _result(h.value, rhs, rhs - h.value, QUADRATURE_TOL + h.err_est, h.engine,
                       err_est=h.err_est)


class LargeShapeSuite(Suite):
    name = "maxdensity-g1"
    description = "1/sqrt(12 shape) <= M <= 1/sqrt(shape) for shape >= 1"

    def settings(self):
        return [{"shape": g} for g in (1.0, 2.0, 5.0)]

    def check_setting(self, setting):
        if setting["shape"] < 1:
            raise PreconditionError("this mode needs shape >= 1")

    def pinned(self):
        return [{"shape": 1.0, "a": [0.5, 0.5]}, {"shape": 1.0, "a": [1.0]}]

    def draw(self, setting, rng):
        n = int(rng.integers(1, 7))
        return [{"shape": setting["shape"], "a": _as_list(simplex_draw(n, rng, zero_prob=0.1))}]

    def evaluate(self, inputs, cfg):
        self.check_setting(inputs)
        g, a = inputs["shape"], inputs["a"]
        md = _finite_max_density(g, a, cfg)
        lo, hi = bounds.large_shape_bounds(g, math.fsum(a))
        margin = min(md.value - lo, hi - md.value)
        return _result(md.value, [lo, hi], margin, QUADRATURE_TOL + md.err_est, md.engine,
                       argmax=md.argmax)


class SmallShapeSuite(Suite):
    name = "maxdensity-g12"
    description = ("M >= 0.003 shape (1 - a_1)^((shape-1)/2) for shape < 1; "
                   "at n = 2 and shape >= 1/2 also the explicit upper constant")

    def settings(self):
        return [{"shape": g} for g in (0.3, 0.6, 0.75)]

    def check_setting(self, setting):
        if not 0 < setting["shape"] < 1:
            raise PreconditionError("this mode needs 0 < shape < 1")

    def pinned(self):
        return [{"shape": 0.75, "a": [0.5, 0.5]}]

    def draw(self, setting, rng):
        g = setting["shape"]
        n_min = max(2, int(math.ceil(1.0 / g - 1e-12)))
        n = int(rng.integers(n_min, n_min + 5))
        return [{"shape": g, "a": _as_list(simplex_draw(n, rng))}]

    def evaluate(self, inputs, cfg):
        self.check_setting(inputs)
        g = inputs["shape"]
        a = np.sort(np.array(inputs["a"]))[::-1]
        md = _finite_max_density(g, a, cfg)
        lo = bounds.small_shape_lower(g, a[0])
        margins = [md.value - lo]
        rhs = [lo]
        if int(np.count_nonzero(a)) == 2 and g >= 0.5:
            hi = bounds.block_upper_constant(g, 1) * bounds.block_profile(a[:2], g, 1)
            margins.append(hi - md.value)
            rhs.append(hi)
        ratio = md.value * (1.0 - a[0]) ** ((1.0 - g) / 2.0)
        return _result(md.value, rhs, min(margins), QUADRATURE_TOL + md.err_est, md.engine,
                       argmax=md.argmax, ratio=ratio)

    def summarize(self, cases):
        ratios = [c["ratio"] for c in cases if "ratio" in c]
        return {"sup_ratio_M_over_profile": max(ratios)} if ratios else {}


class HalfShapeSuite(Suite):
    name = "bnu"
    description = "two-sided bound at shape 1/2 with the constants 1/(2e^2 sqrt(2pi)) and 4/sqrt(pi)"

    def settings(self):
        return [{"shape": 0.5}]

    def check_setting(self, setting):
        if setting["shape"] != 0.5:
            raise PreconditionError("this mode fixes shape = 1/2")

    def pinned(self):
        return [{"shape": 0.5, "a": [0.5, 0.5]}, {"shape": 0.5, "a": [0.99, 0.01]}]

    def draw(self, setting, rng):
        n = int(rng.integers(2, 8))
        return [{"shape": 0.5, "a": _as_list(simplex_draw(n, rng, spike_prob=0.4))}]

    def evaluate(self, inputs, cfg):
        self.check_setting(inputs)
        a = np.sort(np.array(inputs["a"]))[::-1]
        md = _finite_max_density(0.5, a, cfg)
        lo, hi = bounds.half_shape_bounds(a[0])
        return _result(md.value, [lo, hi], min(md.value - lo, hi - md.value),
                       QUADRATURE_TOL + md.err_est, md.engine, argmax=md.argmax)


class BlockSuite(Suite):
    name = "gk"
    description = ("at n = k + 1: c profile <= M <= C profile with explicit constants; "
                   "for n > k + 1: the small-shape lower bound and M <= C profile(first k+1)")

    def settings(self):
        return [{"shape": g} for g in (0.75, 0.4, 0.3)]

    def check_setting(self, setting):
        bounds.block_index(setting["shape"])

    def pinned(self):
        return [{"shape": 0.75, "a": [0.5, 0.5]}, {"shape": 0.75, "a": [0.7, 0.3]}]

    def draw(self, setting, rng):
        g = setting["shape"]
        k = bounds.block_index(g)
        n = k + 1 if rng.random() < 0.5 else int(rng.integers(k + 2, k + 5))
        return [{"shape": g, "a": _as_list(simplex_draw(n, rng))}]

    def evaluate(self, inputs, cfg):
        g = inputs["shape"]
        k = bounds.block_index(g)
        a = np.sort(np.array(inputs["a"]))[::-1]
        if np.count_nonzero(a) < k + 1:
            raise RegimeError(f"need at least k+1 = {k + 1} positive weights")
        md = _finite_max_density(g, a, cfg)
        upper = bounds.block_upper_constant(g, k) * bounds.prefix_profile(a, g, k)
        profile = bounds.block_profile(a, g, k)
        ratio = md.value / profile
        if a.size == k + 1:
            lower = bounds.block_lower_constant(g, k) * profile
            tag = "n = k+1"
        else:
            lower = bounds.small_shape_lower(g, a[0])
            tag = "n > k+1"
        margin = min(md.value - lower, upper - md.value)
        return _result(md.value, [lower, upper], margin, QUADRATURE_TOL + md.err_est, tag,
                       argmax=md.argmax, ratio=ratio, k=k)

    def summarize(self, cases):
        out = {}
        for c in cases:
            if "ratio" not in c:
                continue
            key = f"shape={c['inputs']['shape']!r}"
            out[key] = max(out.get(key, 0.0), c["ratio"])
        return {"sup_ratio_M_over_profile": out}


class EnvelopeSuite(Suite):
    name = "cf-envelope"
    description = "|cf(t)| <= (1 + t^2/m)^(-m shape/2) when a_1 <= 1/m; M <= Fourier bound when m shape > 1"

    T_GRID = tuple(float(t) for t in np.geomspace(1e-2, 1e2, 17))

    def settings(self):
        return [{"shape": g} for g in (0.5, 1.0, 2.0)]

    def pinned(self):
        return [
            {"check": "envelope", "shape": 1.0, "m": 2, "a": [0.5, 0.5], "t": list(self.T_GRID)},
            {"check": "maxdensity", "shape": 1.0, "m": 2, "a": [0.5, 0.5]},
        ]

    def draw(self, setting, rng):
        g = setting["shape"]
        m = int(rng.integers(1, 6))
        n = m + int(rng.integers(0, 4))
        if rng.random() < 0.2:
            a = np.array([1.0 / m] * m + [0.0] * (n - m))
        else:
            # shrink a Dirichlet point toward uniform until a_1 <= 1/m
            d = rng.dirichlet(np.ones(n))
            lam = 1.0
            while True:
                a = lam * d + (1.0 - lam) / n
                if a.max() <= 1.0 / m:
                    break
                lam *= 0.7
            a = np.sort(a)[::-1]
        cases = [{"check": "envelope", "shape": g, "m": m, "a": _as_list(a), "t": list(self.T_GRID)}]
        if m * g > 1:
            cases.append({"check": "maxdensity", "shape": g, "m": m, "a": _as_list(a)})
        return cases

    def evaluate(self, inputs, cfg):
        g, m = inputs["shape"], inputs["m"]
        model = _model(g, inputs["a"])
        if inputs["check"] == "envelope":
            t = np.array(inputs["t"])
            env = cf_envelope(model, m, t)
            mod = cf_modulus(model, t)
            return _result(_as_list(mod), _as_list(env), float(np.min(env - mod)), EXACT_TOL, f"m={m}")
        bound = fourier_density_bound(g, m)
        md = max_density(model, cfg, log_p=log_density_function(model, None, cfg))
        return _result(md.value, bound, bound - md.value, QUADRATURE_TOL + md.err_est,
                       f"m={m}", argmax=md.argmax)


class PointwiseSuite(Suite):
    name = "density-bounds"
    description = "prod(a)^(-shape/2) x^(n shape-1) e^(-x/sqrt(a_min)) / Gamma(n shape) <= p(x) <= same without the exponential"

    def pinned(self):
        return [{"shape": 1.0, "a": [0.5, 0.5], "x": 1.0}]

    def draw(self, setting, rng):
        n = int(rng.integers(1, 5))
        g = float(10.0 ** rng.uniform(math.log10(0.3), math.log10(3.0)))
        a = 10.0 ** rng.uniform(-1.0, 1.0, size=n)
        model = _model(g, a)
        x = float(10.0 ** rng.uniform(math.log10(1e-3 * model.std), math.log10(model.mean + 6 * model.std)))
        return [{"shape": g, "a": _as_list(a), "x": x}]

    def evaluate(self, inputs, cfg):
        model = _model(inputs["shape"], inputs["a"])
        if model.n_effective != model.n:
            raise PreconditionError("pointwise bounds are checked with positive weights only")
        x = inputs["x"]
        lower, upper = density_bounds_pointwise(model, x)
        if grid_engine(model) == "closed":
            p, err = float(density_closed(model, x)), 0.0
            engine = "closed"
        else:
            vals, errs = ConvolutionDensity(model, x_max=x).evaluate([x])
            p, err = float(vals[0]), float(errs[0])
            engine = "convolution"
        margin = min((p - lower) / upper, (upper * (1.0 + 1e-6) - p) / upper)
        return _result(p, [lower, upper], margin, EXACT_TOL + err / upper, engine, err_est=err)


SUITES: Dict[str, Suite] = {
    s.name: s
    for s in (
        PhiSuite(), Phi0Suite(), FGSuite(), EntropySuite(), RenyiSuite(), MomentsSuite(),
        LargeShapeSuite(), SmallShapeSuite(), HalfShapeSuite(), BlockSuite(),
        EnvelopeSuite(), PointwiseSuite(),
    )
}
SUITE_NAMES = tuple(SUITES)


def get_suite(name: str) -> Suite:
    try:
        return SUITES[name]
    except KeyError:
        raise ConfigError(f"unknown suite {name!r}; expected one of {', '.join(SUITE_NAMES)} or all") from None


# --------------------------------------------------------------------------
# runner
# --------------------------------------------------------------------------

def case_inputs(name: str, trials: int, seed: int, settings: Optional[List[dict]] = None) -> List[dict]:
    """Pinned inputs followed by ``trials`` draws per setting, in order."""
    suite = get_suite(name)
    if trials < 0:
        raise ConfigError("trials must be nonnegative")
    items = list(suite.pinned())
    tag = zlib.crc32(name.encode())
    for si, setting in enumerate(settings if settings is not None else suite.settings()):
        suite.check_setting(setting)
        for t in range(trials):
            rng = np.random.default_rng([seed, tag, si, t])
            items.extend(suite.draw(setting, rng))
    return items


def evaluate_case(name: str, inputs: dict, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> dict:
    """Evaluate one case; library errors become failing cases with a message."""
    suite = get_suite(name)
    try:
        res = suite.evaluate(inputs, cfg)
    except GammaSumError as exc:
        res = _result(None, None, -math.inf, 0.0, "error", error=f"{type(exc).__name__}: {exc}")
    res["pass"] = case_passes(res["margin"], res["tolerance"])
    return {"inputs": inputs, **res}


def _evaluate_star(args):
    return evaluate_case(*args)


def run_suite(name: str, trials: int = 100, seed: int = 0,
              cfg: QuadratureConfig = DEFAULT_QUADRATURE, jobs: int = 1,
              settings: Optional[List[dict]] = None) -> CertificateReport:
    """Run a suite; the report is identical for every value of ``jobs``."""
    suite = get_suite(name)
    items = case_inputs(name, trials, seed, settings)
    args = [(name, inp, cfg) for inp in items]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cases = list(pool.map(_evaluate_star, args, chunksize=max(1, len(args) // (4 * jobs))))
    else:
        cases = [evaluate_case(*a) for a in args]
    for i, c in enumerate(cases):
        c["index"] = i
    base = EXACT_TOL if name in ("moments",) else (CLOSED_TOL if name in ("phi", "phi0", "fg") else QUADRATURE_TOL)
    return CertificateReport(suite=name, cases=cases, seed=seed, trials=trials, tolerance=base,
                             summary=suite.summarize(cases))


def replay(record: dict, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> CertificateReport:
    """Re-run serialized cases.

    ``record`` is either a single case ``{"suite": ..., "inputs": {...}}`` or
    a full report, in which case its failing cases (all cases when none
    failed) are replayed.
    """
    if "suite" not in record:
        raise ConfigError("replay record lacks a suite name")
    name = record["suite"]
    if "inputs" in record:
        inputs = [record["inputs"]]
    elif "cases" in record:
        failing = [c["inputs"] for c in record["cases"] if not c.get("pass", False)]
        inputs = failing or [c["inputs"] for c in record["cases"]]
    else:
        raise ConfigError("replay record has neither inputs nor cases")
    cases = [evaluate_case(name, inp, cfg) for inp in inputs]
    for i, c in enumerate(cases):
        c["index"] = i
    return CertificateReport(suite=name, cases=cases, seed=record.get("seed", 0),
                             trials=len(cases), tolerance=record.get("tolerance", QUADRATURE_TOL),
                             summary={"replayed": True})
