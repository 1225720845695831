"""Trend classification of sequences sampled on a geometric ladder.

Sequences here are sup/limit estimates indexed by j where the sampling scale
is 2^-j (shell r_j = 1 - 2^-j, |a| = 1 - 2^-j, n = 2^j).  Power-law behaviour
in the scale becomes geometric behaviour in j, so constant log-increments
identify growth or decay.
"""
from dataclasses import dataclass, field

import numpy as np

GROWTH = 0.05   # per-step log-increment that counts as sustained growth/decay
FLAT = 1e-3     # per-step log-increment that counts as converged
WINDOW = 4      # number of trailing increments inspected

FINITE = "FINITE"
DIVERGENT = "DIVERGENT"
DECAYING = "DECAYING"
INCONCLUSIVE = "INCONCLUSIVE"

_TINY = 1e-300


@dataclass(frozen=True)
class LadderTrend:
    status: str
    limit: float
    increments: tuple = field(default=(), repr=False)


def log_increments(values):
    v = np.maximum(np.asarray(values, dtype=float), _TINY)
    return np.diff(np.log(v))


def classify(values, window=WINDOW, growth=GROWTH, flat=FLAT):
    """Classify a positive sequence by its trailing log-increments.

    DIVERGENT: every trailing increment >= growth (limit +inf).
    DECAYING:  every trailing increment <= -growth (limit 0).
    FINITE:    last increment within +-flat and no larger than the trailing
               maximum (limit = last value).
    Exactly-zero tails are FINITE with limit 0.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return LadderTrend(INCONCLUSIVE, float("nan"))
    if not np.all(np.isfinite(v)):
        return LadderTrend(DIVERGENT, float("inf"))
    tail = v[-(window + 1):]
    if np.all(tail == 0.0):
        return LadderTrend(FINITE, 0.0)
    if v.size < window + 1:
        return LadderTrend(INCONCLUSIVE, float(v[-1]))
    d = log_increments(tail)
    inc = tuple(float(x) for x in d)
    if np.all(d >= growth):
        return LadderTrend(DIVERGENT, float("inf"), inc)
    if np.all(d <= -growth):
        return LadderTrend(DECAYING, 0.0, inc)
    if abs(d[-1]) <= flat and abs(d[-1]) <= np.max(np.abs(d)):
        return LadderTrend(FINITE, float(v[-1]), inc)
    return LadderTrend(INCONCLUSIVE, float(v[-1]), inc)


def aitken(values):
    """Aitken delta-squared extrapolation of the last three entries."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return float(v[-1]) if v.size else float("nan")
    x0, x1, x2 = v[-3:]
    den = x2 - 2.0 * x1 + x0
    if den == 0.0 or not np.isfinite(den):
        return float(x2)
    return float(x2 - (x2 - x1) ** 2 / den)
