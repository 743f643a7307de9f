import math

import numpy as np
import pytest
from scipy import integrate as spi
from scipy import stats

from gammasum.density import log_density_function
from gammasum.entropy import (
    MaxDensity,
    entropy,
    gamma_renyi_entropy,
    gamma_shannon_entropy,
    gaussian_entropy,
    max_density,
    relative_entropy_to_gaussian,
    renyi_entropy,
    shannon_entropy,
    uniform_renyi_entropy,
    uniform_shannon_entropy,
)
from gammasum.errors import DivergenceError, PreconditionError
from gammasum.model import GammaSumModel

from conftest import random_model

UNIFORM_2 = 2.0 - (1.0 - 0.5772156649015329) - 0.5 * math.log(2.0)


def finite_regime_model(rng, n_range=(1, 4)):
    """Random model with n_effective * shape >= 1 (finite maximal density)."""
    while True:
        m = random_model(rng, n_range=n_range, shape_range=(0.3, 3.0))
        if m.total_shape >= 1.05:
            return m


def test_shannon_examples():
    assert shannon_entropy(GammaSumModel.of(1.0, [1.0])).value == pytest.approx(1.0, abs=1e-12)
    h = shannon_entropy(GammaSumModel.of(1.0, [0.5, 0.5]))
    assert h.engine == "closed"
    assert h.value == pytest.approx(UNIFORM_2, abs=1e-9)
    assert uniform_shannon_entropy(1.0, 2) == pytest.approx(UNIFORM_2, abs=1e-14)
    # quoted figure carries a ~1.3e-5 slip in its last digits
    assert uniform_shannon_entropy(1.0, 2) == pytest.approx(1.2306547, abs=2e-5)


def test_shannon_matches_scipy_gamma_entropy():
    for k in (0.2, 0.5, 1.0, 3.7, 40.0):
        assert gamma_shannon_entropy(k, 2.5) == pytest.approx(float(stats.gamma(k, scale=2.5).entropy()), rel=1e-12)


@pytest.mark.parametrize("shape,n", [(0.4, 3), (1.0, 2), (2.5, 4)])
def test_uniform_oracles_against_quadrature(shape, n):
    dist = stats.gamma(shape * n, scale=1 / math.sqrt(n))
    h = spi.quad(lambda x: -dist.pdf(x) * dist.logpdf(x), 0, np.inf, limit=200)[0]
    assert uniform_shannon_entropy(shape, n) == pytest.approx(h, abs=1e-8)
    for al in (0.5, 2.0, 3.0):
        if al * (shape * n - 1) + 1 <= 0:
            continue
        i = spi.quad(lambda x: dist.pdf(x) ** al, 0, np.inf, limit=200)[0]
        assert uniform_renyi_entropy(shape, n, al) == pytest.approx(math.log(i) / (1 - al), abs=1e-7)


def test_renyi_examples():
    assert renyi_entropy(GammaSumModel.of(1.0, [1.0]), 2.0).value == pytest.approx(math.log(2), abs=1e-10)
    # Gamma(2) scaled by 1/sqrt(2): int g^2 = sqrt(2)/4
    h2 = renyi_entropy(GammaSumModel.of(1.0, [0.5, 0.5]), 2.0).value
    assert h2 == pytest.approx(-math.log(math.sqrt(2) / 4), abs=1e-10)
    assert h2 == pytest.approx(uniform_renyi_entropy(1.0, 2, 2.0), abs=1e-12)
    assert gamma_renyi_entropy(3.0, 1.0) == gamma_shannon_entropy(3.0)


def test_scale_covariance():
    base = GammaSumModel.of(1.3, [0.5, 0.3, 0.2])
    scaled = GammaSumModel.of(1.3, [16 * v for v in (0.5, 0.3, 0.2)])
    assert shannon_entropy(scaled).value == pytest.approx(shannon_entropy(base).value + math.log(4), abs=1e-8)
    for al in (0.5, 3.0, math.inf):
        assert renyi_entropy(scaled, al).value == pytest.approx(renyi_entropy(base, al).value + math.log(4), abs=1e-8)


def test_engines_agree():
    model = GammaSumModel.of(1.5, [0.6, 0.3, 0.1])
    conv = shannon_entropy(model, engine="convolution")
    cf = shannon_entropy(model, engine="cf_inversion")
    assert conv.value == pytest.approx(cf.value, abs=1e-8)
    assert conv.err_est < 1e-7


def test_order_continuity(rng):
    for _ in range(10):
        model = random_model(rng, n_range=(1, 4), shape_range=(0.4, 3.0))
        h = shannon_entropy(model).value
        for al in (1 - 1e-3, 1 + 1e-3):
            if al * (model.total_shape - 1) + 1 <= 0:
                continue
            assert abs(renyi_entropy(model, al).value - h) <= 5e-3


def test_order_monotonicity(rng):
    orders = (0.5, 0.8, 1.0, 2.0, 4.0, math.inf)
    for _ in range(20):
        model = finite_regime_model(rng)
        vals = [entropy(model, al).value for al in orders]
        assert all(u >= v - 1e-8 for u, v in zip(vals, vals[1:])), vals


@pytest.mark.parametrize("shape,a", [(1.0, (0.5, 0.5)), (2.0, (0.6, 0.4)), (0.8, (0.4, 0.3, 0.3)),
                                     (1.0, (1.0,))])
def test_min_entropy_is_the_large_order_limit(shape, a):
    model = GammaSumModel.of(shape, a)
    orders = np.array([16.0, 32.0, 64.0])
    h = np.array([renyi_entropy(model, al).value for al in orders])
    # (1 - alpha) h_alpha = alpha log M + log C - b log(alpha) + O(1/alpha), so
    # h_alpha = h_inf + b log(alpha)/(alpha - 1) + c/(alpha - 1) + O(alpha^-2)
    basis = np.column_stack((np.ones(3), np.log(orders) / (orders - 1), 1.0 / (orders - 1)))
    h_inf = np.linalg.solve(basis, h)[0]
    assert h_inf == pytest.approx(renyi_entropy(model, math.inf).value, abs=1e-3)
    assert renyi_entropy(model, math.inf).value == pytest.approx(-math.log(max_density(model).value), abs=1e-15)


def test_max_density_examples():
    md = max_density(GammaSumModel.of(1.0, [1.0]))
    assert (md.value, md.argmax) == (pytest.approx(1.0, rel=1e-14), 0.0)
    m, x = max_density(GammaSumModel.of(1.0, [0.5, 0.5]))
    assert m == pytest.approx(math.sqrt(2) / math.e, rel=1e-14)
    assert x == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    inf = max_density(GammaSumModel.of(0.5, [1.0]))
    assert not inf.finite and inf.value == math.inf
    # boundary shape * n = 1: finite limit at 0
    edge = max_density(GammaSumModel.of(0.5, [0.7, 0.3]))
    assert edge.value == pytest.approx((0.7 * 0.3) ** -0.25, rel=1e-12)
    assert isinstance(edge, MaxDensity)


def test_max_density_unequal_weights_against_cf():
    model = GammaSumModel.of(1.2, [0.6, 0.3, 0.1])
    conv = max_density(model)
    cf = max_density(model, engine="cf_inversion", log_p=log_density_function(model, "cf_inversion"))
    assert conv.value == pytest.approx(cf.value, rel=1e-7)
    assert conv.argmax == pytest.approx(cf.argmax, rel=1e-3)


def test_moriguti_and_log_concave_bounds(rng):
    for _ in range(25):
        model = finite_regime_model(rng)
        m = max_density(model).value
        var = model.variance
        assert m >= 1 / math.sqrt(12 * var)
        if model.shape >= 1:
            assert m <= 1 / math.sqrt(var) * (1 + 1e-9)


def test_relative_entropy_to_gaussian():
    d = relative_entropy_to_gaussian(GammaSumModel.of(1.0, [1.0])).value
    assert d == pytest.approx(0.5 * math.log(2 * math.pi * math.e) - 1, abs=1e-12)
    assert d == pytest.approx(0.4189385, abs=1e-7)
    extreme = relative_entropy_to_gaussian(GammaSumModel.of(1.0, [1.0, 0.0])).value
    uniform = relative_entropy_to_gaussian(GammaSumModel.of(1.0, [0.5, 0.5])).value
    assert extreme > uniform
    assert gaussian_entropy(1.0) == pytest.approx(1.4189385, abs=1e-7)


def test_relative_entropy_nonnegative(rng):
    for _ in range(50):
        model = random_model(rng, n_range=(1, 4), shape_range=(0.5, 4.0))
        assert relative_entropy_to_gaussian(model).value >= -1e-8


def test_divergence_and_preconditions():
    small = GammaSumModel.of(0.3, [1.0])
    with pytest.raises(DivergenceError) as exc:
        renyi_entropy(small, 2.0)
    assert exc.value.value == -math.inf
    with pytest.raises(DivergenceError):
        renyi_entropy(small, math.inf)
    with pytest.raises(DivergenceError):
        gamma_renyi_entropy(0.3, 2.0)
    with pytest.raises(PreconditionError):
        renyi_entropy(small, 1.0)
    with pytest.raises(PreconditionError):
        renyi_entropy(small, 100.0)
    with pytest.raises(PreconditionError):
        renyi_entropy(small, -1.0)
    # orders below 1 and the finite part of the regime are fine even with M infinite
    assert math.isfinite(renyi_entropy(small, 0.5).value)
    assert renyi_entropy(small, 1.2).value == pytest.approx(gamma_renyi_entropy(0.3, 1.2), abs=1e-8)


def test_support_order():
    r = entropy(GammaSumModel.of(1.0, [0.5, 0.5]), 0.0)
    assert r.value == math.inf and r.engine == "support"
    assert r.to_dict()["order"] == 0.0


def test_small_shape_shannon_against_closed():
    for shape, n in ((0.2, 3), (0.35, 2)):
        model = GammaSumModel.of(shape, [1.0 / n] * n)
        assert shannon_entropy(model).value == pytest.approx(uniform_shannon_entropy(shape, n), abs=1e-8)
    # unequal weights with a diverging density at 0
    model = GammaSumModel.of(0.3, [0.7, 0.3])
    h_cv = shannon_entropy(model).value
    assert h_cv < uniform_shannon_entropy(0.3, 2)
