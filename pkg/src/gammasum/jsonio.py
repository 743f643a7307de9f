"""JSON helpers: non-finite floats travel as quoted sentinels.

Finite floats are written with ``repr`` (shortest round-trip form), so a
parsed file re-serializes byte-identically.
"""

from __future__ import annotations

import json
import math

import numpy as np

SENTINELS = {"+inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def encode(obj):
    """Recursively replace non-finite floats and numpy scalars/arrays."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "+inf" if x > 0 else "-inf"
        return x
    return obj


def decode(obj):
    """Inverse of :func:`encode` for the sentinel strings."""
    if isinstance(obj, dict):
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    if isinstance(obj, str) and obj in SENTINELS:
        return SENTINELS[obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(encode(obj), indent=2, allow_nan=False) + "\n"


def loads(text: str):
    return decode(json.loads(text))
