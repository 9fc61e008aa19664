"""Small helpers for nonnegative extended reals, the codomain [0, inf].

All divergence outputs are plain floats where ``math.inf`` is a legal
value and NaN never is.
"""

from __future__ import annotations

import math

INF = math.inf


def ensure_extended(value: float, what: str = "value") -> float:
    """Validate that ``value`` lies in [0, inf]; NaN is always rejected."""
    v = float(value)
    if math.isnan(v):
        raise ValueError(f"{what} must not be NaN")
    if v < 0.0:
        raise ValueError(f"{what} must be nonnegative, got {v!r}")
    return v


def ext_mul(a: float, b: float) -> float:
    """Product on [0, inf] with the measure-theoretic rule 0 * inf = 0."""
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def fmt_extended(value: float):
    """JSON-safe rendering: infinities become the strings 'inf' / '-inf'."""
    if value == INF:
        return "inf"
    if value == -INF:
        return "-inf"
    return value
