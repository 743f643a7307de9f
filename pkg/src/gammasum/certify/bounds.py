"""Explicit constants of the two-sided maximal-density bounds.

Weight vectors passed here are sorted descending and sum to one unless a
function says otherwise.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import PreconditionError

# lower-bound constant c = 0.003 * shape, valid for every shape in (0, 1)
SMALL_SHAPE_LOWER_FACTOR = 0.003
BNU_LOWER = 1.0 / (2.0 * math.e ** 2 * math.sqrt(2.0 * math.pi))
BNU_UPPER = 4.0 / math.sqrt(math.pi)


def large_shape_bounds(shape: float, total: float = 1.0):
    """``(1/sqrt(12 var), 1/sqrt(var))`` with ``var = shape * total``.

    The lower side holds for every random variable with that variance, the
    upper one for every log-concave variable (so for ``shape >= 1``).
    """
    var = shape * total
    return 1.0 / math.sqrt(12.0 * var), 1.0 / math.sqrt(var)


def small_shape_lower(shape: float, a1: float) -> float:
    """``0.003 shape (1 - a_1)**((shape - 1)/2)`` for ``0 < shape < 1``."""
    if not 0 < shape < 1:
        raise PreconditionError(f"lower bound needs 0 < shape < 1, got {shape!r}")
    return SMALL_SHAPE_LOWER_FACTOR * shape * (1.0 - a1) ** ((shape - 1.0) / 2.0)


def half_shape_bounds(a1: float):
    """Both sides of the two-sided bound at shape 1/2, scaled by ``(1 - a_1)**(-1/4)``."""
    f = (1.0 - a1) ** -0.25
    return BNU_LOWER * f, BNU_UPPER * f


def block_index(shape: float) -> int:
    """``k`` with ``1/(k+1) <= shape < 1/k``."""
    if not 0 < shape < 1:
        raise PreconditionError(f"block index needs 0 < shape < 1, got {shape!r}")
    return int(math.ceil(1.0 / shape - 1e-12)) - 1


def _log_peak(shape: float, k: int) -> float:
    # log sup_x x**b e**-x with b = (k+1) shape - 1 >= 0
    b = (k + 1) * shape - 1.0
    return 0.0 if b == 0 else b * math.log(b) - b


def block_upper_constant(shape: float, k: int) -> float:
    """``C = L Gamma(1 - k shape) / Gamma(shape)`` for ``n = k + 1`` summands.

    ``L = sup_x x**((k+1)shape - 1) e**-x``; the simplex integral
    ``int t**(shape-1) (1 - sum t)**(-k shape) dt`` over the ``k``-simplex
    equals ``Gamma(shape)**k Gamma(1 - k shape)``.
    """
    _check_block(shape, k)
    return math.exp(_log_peak(shape, k) + math.lgamma(1.0 - k * shape) - math.lgamma(shape))


def block_lower_constant(shape: float, k: int) -> float:
    """``c = L / Gamma((k+1) shape)``; sharp order at ``n = k + 1``."""
    _check_block(shape, k)
    return math.exp(_log_peak(shape, k) - math.lgamma((k + 1) * shape))


def _check_block(shape, k):
    if not (k >= 1 and 1.0 / (k + 1) <= shape * (1 + 1e-12) and shape < 1.0 / k):
        raise PreconditionError(f"need 1/(k+1) <= shape < 1/k, got shape={shape!r}, k={k!r}")


def block_profile(a, shape: float, k: int) -> float:
    """``(a_1...a_k)**(-shape/2) * (sum_{j>k} a_j)**((k shape - 1)/2)``."""
    a = np.sort(np.asarray(a, dtype=float))[::-1]
    if a.size <= k:
        return math.inf
    head = float(np.sum(np.log(a[:k])))
    tail = math.fsum(a[k:])
    return math.exp(-0.5 * shape * head + 0.5 * (k * shape - 1.0) * math.log(tail))


def prefix_profile(a, shape: float, k: int) -> float:
    """Profile of the first ``k + 1`` weights: ``(a_1...a_k)**(-shape/2) a_{k+1}**((k shape-1)/2)``."""
    a = np.sort(np.asarray(a, dtype=float))[::-1]
    return block_profile(a[: k + 1], shape, k)
