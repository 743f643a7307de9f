import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammasum.errors import ConfigError, DomainError, PreconditionError
from gammasum.model import (
    GammaSumModel,
    MajorizationPair,
    WeightVector,
    is_majorized,
    prefix_differences,
    random_majorization_pair,
    robin_hood,
    schur_ostrowski_check,
)

weights = st.lists(st.floats(0.0, 10.0, allow_nan=False), min_size=1, max_size=8).filter(
    lambda v: sum(v) > 1e-6
)


def test_parse_and_normalize():
    w = WeightVector.parse("1, 1,2")
    assert w.a == (1.0, 1.0, 2.0)
    assert WeightVector.parse("1,1,2", normalize=True).a == (0.25, 0.25, 0.5)
    assert not w.canonical_order
    assert w.canonical().a == (2.0, 1.0, 1.0)


@pytest.mark.parametrize("text", ["", "a,b", "1,-1", "0,0", "nan,1"])
def test_parse_rejects_bad_weights(text):
    with pytest.raises(ConfigError):
        WeightVector.parse(text)


def test_model_properties():
    m = GammaSumModel.of(2.0, [0.0, 0.25, 1.0])
    assert m.n == 3 and m.n_effective == 2
    assert np.allclose(m.scales, [1.0, 0.5])
    assert m.mean == pytest.approx(3.0)
    assert m.variance == pytest.approx(2.5)
    assert m.total_shape == 4.0
    assert not m.equal_weights
    assert GammaSumModel.of(1.0, [0.5, 0.0, 0.5]).equal_weights
    assert GammaSumModel.from_dict(m.to_dict()) == m
    with pytest.raises(ConfigError):
        GammaSumModel.of(0.0, [1.0])


def test_weight_json_round_trip():
    w = WeightVector((0.1, 0.2, 0.7))
    assert WeightVector.from_json(w.to_json()) == w


def test_majorization_examples():
    assert is_majorized([1, 0], [0.5, 0.5])
    assert not is_majorized([0.5, 0.5], [1, 0])
    assert is_majorized([0.6, 0.3, 0.1], [0.6, 0.3, 0.1])
    assert is_majorized([0.1, 0.3, 0.6], [0.3, 0.4, 0.3])
    with pytest.raises(PreconditionError):
        is_majorized([1, 0], [0.4, 0.4])
    with pytest.raises(PreconditionError):
        is_majorized([1], [0.5, 0.5])


def test_majorization_pair_validates():
    MajorizationPair(WeightVector((1.0, 0.0)), WeightVector((0.5, 0.5)))
    with pytest.raises(PreconditionError):
        MajorizationPair(WeightVector((0.5, 0.5)), WeightVector((1.0, 0.0)))


@given(weights, st.integers(0, 2**32 - 1))
def test_robin_hood_is_majorized(a, seed):
    a = np.array(a)
    b = robin_hood(a, np.random.default_rng(seed))
    assert math.isclose(b.sum(), a.sum(), rel_tol=1e-12, abs_tol=1e-12)
    assert np.all(prefix_differences(a, b) >= -1e-12 * max(1.0, a.sum()))


@settings(max_examples=60)
@given(st.integers(2, 8), st.floats(1e-3, 1e3), st.integers(0, 2**32 - 1))
def test_random_pairs_are_ordered(n, total, seed):
    pair = random_majorization_pair(n, total, seed)
    assert is_majorized(pair.upper, pair.lower)
    assert math.fsum(pair.upper) == pytest.approx(total, rel=1e-12)
    assert math.fsum(pair.lower) == pytest.approx(math.fsum(pair.upper), rel=1e-14)
    assert sorted(pair.upper) != sorted(pair.lower)
    assert all(w >= -1e-12 for w in pair.witness)


def test_random_pair_is_deterministic():
    a = random_majorization_pair(5, 1.0, [3, 4])
    b = random_majorization_pair(5, 1.0, [3, 4])
    assert a == b


def test_schur_ostrowski_signs():
    sum_sq = lambda x: float(np.sum(x ** 2))  # Schur-convex
    assert schur_ostrowski_check(sum_sq, [3.0, 1.0, 2.0], 0, 1) > 0
    entropy_like = lambda x: float(-np.sum(x * np.log(x)))  # Schur-concave
    assert schur_ostrowski_check(entropy_like, [0.7, 0.2, 0.1], 0, 2) < 0
    # analytic value for sum of squares: (x_i - x_j) * 2 (x_i - x_j)
    assert schur_ostrowski_check(sum_sq, [3.0, 1.0], 0, 1) == pytest.approx(8.0, rel=1e-8)


def test_schur_ostrowski_domain():
    with pytest.raises(DomainError):
        schur_ostrowski_check(lambda x: 0.0, [1e-9, 1.0], 0, 1, h=1e-6)
    with pytest.raises(PreconditionError):
        schur_ostrowski_check(lambda x: 0.0, [1.0, 1.0], 0, 1)
