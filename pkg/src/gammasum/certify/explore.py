"""Best-effort exploration of the maximal density for small shapes.

For shape < 1/2 and ``n > k + 1`` summands no matching two-sided bound is
known. This module samples weight vectors and reports how ``M`` compares
with the candidate profiles; it issues no verdict.
"""

from __future__ import annotations

import math
import zlib

import numpy as np

from ..density import log_density_function
from ..entropy import max_density
from ..errors import PreconditionError
from ..model import GammaSumModel
from ..numerics import DEFAULT_QUADRATURE, QuadratureConfig
from . import bounds


def explore_small_shape(shape: float, n: int, trials: int = 50, seed: int = 0,
                        cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> dict:
    """Ratios of ``M`` to the block profile and to ``(1 - a_1)**((shape-1)/2)``.

    Draws are Dirichlet(1) points plus the uniform vector; the result lists
    each draw and the observed extremes of both ratios.
    """
    if not 0 < shape < 1:
        raise PreconditionError("exploration covers 0 < shape < 1")
    k = bounds.block_index(shape)
    if n < k + 1:
        raise PreconditionError(f"n = {n} <= k = {k}: the maximal density is infinite")
    tag = zlib.crc32(b"explore")
    draws = [np.full(n, 1.0 / n)]
    for t in range(trials):
        rng = np.random.default_rng([seed, tag, t])
        draws.append(np.sort(rng.dirichlet(np.ones(n)))[::-1])
    records = []
    for a in draws:
        model = GammaSumModel.of(shape, a)
        md = max_density(model, cfg, log_p=log_density_function(model, None, cfg))
        records.append({
            "a": [float(v) for v in a],
            "M": md.value,
            "argmax": md.argmax,
            "ratio_block": md.value / bounds.block_profile(a, shape, k),
            "ratio_spike": md.value * (1.0 - a[0]) ** ((1.0 - shape) / 2.0),
        })
    rb = [r["ratio_block"] for r in records]
    rs = [r["ratio_spike"] for r in records]
    return {
        "shape": shape,
        "n": n,
        "k": k,
        "trials": trials,
        "seed": seed,
        "ratio_block": {"min": min(rb), "max": max(rb)},
        "ratio_spike": {"min": min(rs), "max": max(rs)},
        "log_spread_block": math.log(max(rb) / min(rb)),
        "records": records,
    }
