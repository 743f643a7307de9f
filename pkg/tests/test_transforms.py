import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import chebyshev as C
from scipy import special

from gammasum.errors import DomainError, MomentOverflowError, PreconditionError
from gammasum.model import GammaSumModel
from gammasum.transforms import (
    centred_log_mgf,
    central_moments,
    cf,
    cf_envelope,
    cf_modulus,
    cumulant,
    mgf,
)

from conftest import random_model


def moments_by_convolution(shape, a, K):
    """Central moments of sum sqrt(a_j)(X_j - shape) from gamma raw moments.

    Raw moments E X^k = Gamma(shape + k)/Gamma(shape) are recentred by the
    binomial theorem, scaled, then combined by binomial convolution.
    """
    raw = [math.exp(special.gammaln(shape + k) - special.gammaln(shape)) for k in range(K + 1)]
    single = [math.fsum(math.comb(k, i) * raw[i] * (-shape) ** (k - i) for i in range(k + 1))
              for k in range(K + 1)]
    total = [1.0] + [0.0] * K
    for aj in a:
        if aj == 0:
            continue
        s = math.sqrt(aj)
        mj = [single[k] * s ** k for k in range(K + 1)]
        total = [math.fsum(math.comb(k, i) * total[i] * mj[k - i] for i in range(k + 1))
                 for k in range(K + 1)]
    return total


def test_mgf_examples():
    assert mgf(GammaSumModel.of(2.0, [1.0]), 0.5) == pytest.approx(4.0, rel=1e-14)
    assert mgf(GammaSumModel.of(1.0, [0.25, 0.25]), 1.0) == pytest.approx(4.0, rel=1e-14)
    assert mgf(GammaSumModel.of(0.7, [0.3, 0.2]), 0.0) == 1.0
    # exponential: 1/(1 - t)
    for t in (-3.0, -0.5, 0.2, 0.9):
        assert mgf(GammaSumModel.of(1.0, [1.0]), t) == pytest.approx(1.0 / (1.0 - t), rel=1e-14)


def test_mgf_domain():
    with pytest.raises(DomainError):
        mgf(GammaSumModel.of(1.0, [1.0]), 1.0)
    with pytest.raises(DomainError):
        centred_log_mgf(GammaSumModel.of(1.0, [0.25, 0.04]), 2.0)


def test_centred_log_mgf():
    m = GammaSumModel.of(1.0, [1.0])
    assert centred_log_mgf(m, 0.0) == 0.0
    series = math.fsum(0.5 ** k / k for k in range(2, 80))
    assert centred_log_mgf(m, 0.5) == pytest.approx(series, abs=1e-12)
    assert centred_log_mgf(m, 0.5) == pytest.approx(0.1931472, abs=1e-7)


def test_cf_examples():
    m = GammaSumModel.of(1.0, [1.0])
    assert cf(m, 0.0) == 1.0
    assert cf(m, 1.0) == pytest.approx(0.5 + 0.5j, abs=1e-15)
    # the principal branch per factor keeps the phase continuous past pi
    m3 = GammaSumModel.of(3.0, [1.0, 0.5, 0.2])
    t = np.linspace(0.0, 50.0, 501)
    direct = np.prod([(1 - 1j * math.sqrt(a) * t) ** -3.0 for a in (1.0, 0.5, 0.2)], axis=0)
    assert np.allclose(cf(m3, t), direct, rtol=1e-12, atol=1e-300)


@given(st.integers(0, 2**32 - 1), st.floats(-50, 50))
def test_cf_symmetry_and_modulus(seed, t):
    model = random_model(np.random.default_rng(seed))
    z = cf(model, t)
    assert cf(model, -t) == pytest.approx(z.conjugate(), rel=1e-12, abs=1e-300)
    assert cf_modulus(model, t) == pytest.approx(abs(z), rel=1e-12, abs=1e-300)
    assert abs(z) <= 1.0 + 1e-15


def test_cf_matches_gamma_characteristic_function():
    # Gamma(k) cf is (1 - i t)^(-k); weights equal collapse to Gamma(n k) scaled
    model = GammaSumModel.of(0.75, [0.25] * 4)
    t = np.array([0.3, 1.7, 9.0])
    assert np.allclose(cf(model, t), (1 - 0.5j * t) ** -3.0, rtol=1e-13)


def test_envelope_examples():
    m = GammaSumModel.of(1.0, [0.5, 0.5])
    assert cf_envelope(m, 2, 1.0) == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert cf_modulus(m, 1.0) == pytest.approx(2.0 / 3.0, rel=1e-15)
    m = GammaSumModel.of(1.0, [0.4, 0.3, 0.3])
    assert cf_envelope(m, 2, 2.0) == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert cf_modulus(m, 2.0) == pytest.approx((2.6 * 2.2 * 2.2) ** -0.5, rel=1e-14)
    assert cf_modulus(m, 2.0) == pytest.approx(0.2818971, abs=1e-7)
    assert cf_modulus(m, 2.0) < cf_envelope(m, 2, 2.0)
    assert cf_envelope(m, 2, 0.0) == 1.0 == cf_modulus(m, 0.0)


def test_envelope_preconditions():
    m = GammaSumModel.of(1.0, [0.6, 0.4])
    with pytest.raises(PreconditionError):
        cf_envelope(m, 2, 1.0)
    with pytest.raises(PreconditionError):
        cf_envelope(m, 0, 1.0)


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.floats(0, 1e3), st.floats(0.05, 5.0))
def test_envelope_dominates(seed, m, t, shape):
    rng = np.random.default_rng(seed)
    n = m + int(rng.integers(0, 4))
    a = rng.dirichlet(np.ones(n))
    lam = 1.0
    while (lam * a + (1 - lam) / n).max() > 1.0 / m:
        lam *= 0.7
    a = lam * a + (1 - lam) / n
    a *= 10.0 ** rng.uniform(-1, 1)
    model = GammaSumModel.of(shape, a)
    assert cf_modulus(model, t) <= cf_envelope(model, m, t) * (1 + 1e-12) + 1e-300


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_envelope_equality_at_extreme_point(m):
    model = GammaSumModel.of(1.3, [1.0 / m] * m + [0.0, 0.0])
    t = np.geomspace(1e-3, 1e3, 25)
    assert np.allclose(cf_modulus(model, t), cf_envelope(model, m, t), rtol=1e-12)


def test_cumulants():
    assert cumulant(GammaSumModel.of(0.7, [0.2, 0.3, 0.5]), 2) == pytest.approx(0.7, rel=1e-15)
    assert cumulant(GammaSumModel.of(1.0, [0.5, 0.5]), 3) == pytest.approx(1.4142136, abs=1e-7)
    assert cumulant(GammaSumModel.of(1.0, [1.0]), 4) == 6.0
    with pytest.raises(PreconditionError):
        cumulant(GammaSumModel.of(1.0, [1.0]), 1)
    # log-domain branch beyond order 20 agrees with the factorial form
    big = GammaSumModel.of(1.0, [0.5, 0.5])
    assert cumulant(big, 25) == pytest.approx(math.factorial(24) * 2 * 0.5 ** 12.5, rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_cumulants_are_taylor_coefficients(seed):
    model = random_model(np.random.default_rng(seed))
    r = 0.3 / float(model.scales[0])
    cheb = C.Chebyshev.interpolate(lambda t: np.array([centred_log_mgf(model, v * r) for v in t]), 30)
    coef = C.cheb2poly(cheb.coef)
    for k in range(2, 7):
        taylor = coef[k] * math.factorial(k) / r ** k
        assert taylor == pytest.approx(cumulant(model, k), rel=1e-6)


def test_central_moment_examples():
    t = central_moments(GammaSumModel.of(1.0, [1.0]), 4)
    assert list(t.central_moments) == [1.0, 0.0, 1.0, 2.0, 9.0]
    assert central_moments(GammaSumModel.of(0.5, [0.5, 0.5]), 2).moment(2) == pytest.approx(0.5)
    with pytest.raises(MomentOverflowError):
        central_moments(GammaSumModel.of(1.0, [1.0]), 61)
    with pytest.raises(PreconditionError):
        central_moments(GammaSumModel.of(1.0, [1.0]), 0)
    assert central_moments(GammaSumModel.of(1.0, [1.0]), 60).moment(60) > 0


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_central_moments_match_binomial_oracle(seed):
    rng = np.random.default_rng(seed)
    model = random_model(rng)
    K = 12
    got = central_moments(model, K).central_moments
    want = moments_by_convolution(model.shape, model.weights.a, K)
    for k in range(K + 1):
        assert got[k] == pytest.approx(want[k], rel=1e-9, abs=1e-12 * max(1.0, abs(want[k])))


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_central_moments_nonnegative(seed):
    rng = np.random.default_rng(seed)
    model = GammaSumModel.of(float(rng.uniform(0.1, 5.0)), rng.dirichlet(np.ones(int(rng.integers(1, 7)))))
    mu = central_moments(model, 12).central_moments
    assert mu[1] == 0.0
    assert all(v >= 0 for v in mu)


def test_moment_table_json():
    t = central_moments(GammaSumModel.of(1.0, [0.5, 0.5]), 4)
    d = t.to_dict()
    assert d["orders"] == [0, 1, 2, 3, 4]
    assert d["cumulants"]["2"] == pytest.approx(1.0)
    assert '"central_moments"' in t.to_json()
