"""Hot inner loops: power-series evaluation and weighted maxima over grids.

Every kernel exists twice, once as plain numpy and once compiled with numba.
The compiled path is used when numba imports cleanly and the environment
variable ``WDC_NUMBA`` is not set to ``0``/``false``/``no``/``off``.  Both
paths are always importable so tests and ``benchmarks/bench_kernels.py`` can
compare them directly.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("WDC_NUMBA", "1").strip().lower()
USE_NUMBA = numba is not None and _FLAG not in ("0", "false", "no", "off")


# ---------------------------------------------------------------------------
# numpy reference path
# ---------------------------------------------------------------------------

def horner_numpy(coeffs, z):
    """Evaluate sum_m coeffs[m] * z**m at every entry of the 1-D array z."""
    out = np.zeros(z.shape, dtype=np.complex128)
    for c in coeffs[::-1]:
        out *= z
        out += c
    return out


def horner_derivative_numpy(coeffs, z, k):
    """Evaluate the k-th derivative of the series without building new coefficients."""
    n = coeffs.shape[0]
    out = np.zeros(z.shape, dtype=np.complex128)
    if k >= n:
        return out
    m = np.arange(k, n, dtype=np.float64)
    fall = np.ones(n - k)
    for i in range(k):
        fall *= m - i
    for c in (coeffs[k:] * fall)[::-1]:
        out *= z
        out += c
    return out


def weighted_abs_max_numpy(values, weights):
    """Return (max_i weights[i]*|values[i]|, argmax, any_nonfinite)."""
    prod = weights * np.abs(values)
    bad = ~np.isfinite(prod)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        return np.inf, idx, True
    if prod.size == 0:
        return -np.inf, -1, False
    idx = int(np.argmax(prod))
    return float(prod[idx]), idx, False


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if numba is not None:

    @numba.njit(cache=True)
    def horner_numba(coeffs, z):
        # points in the inner loop: independent lanes vectorise, a
        # per-point recurrence would serialise on the multiply latency
        n = coeffs.shape[0]
        out = np.zeros(z.shape[0], dtype=np.complex128)
        for m in range(n - 1, -1, -1):
            c = coeffs[m]
            for i in range(z.shape[0]):
                out[i] = out[i] * z[i] + c
        return out

    @numba.njit(cache=True)
    def horner_derivative_numba(coeffs, z, k):
        n = coeffs.shape[0]
        out = np.zeros(z.shape[0], dtype=np.complex128)
        if k >= n:
            return out
        scaled = np.empty(n - k, dtype=np.complex128)
        for m in range(k, n):
            fall = 1.0
            for i in range(k):
                fall *= m - i
            scaled[m - k] = coeffs[m] * fall
        for m in range(n - k - 1, -1, -1):
            c = scaled[m]
            for i in range(z.shape[0]):
                out[i] = out[i] * z[i] + c
        return out

    @numba.njit(cache=True)
    def _weighted_abs_max_numba(values, weights):
        best = -np.inf
        idx = -1
        for i in range(values.shape[0]):
            v = weights[i] * abs(values[i])
            if v > best:
                best = v
                idx = i
            elif not v <= best:
                return np.inf, i, True
        if best == np.inf:
            return np.inf, idx, True
        return best, idx, False

    def weighted_abs_max_numba(values, weights):
        best, idx, bad = _weighted_abs_max_numba(values, weights)
        return float(best), int(idx), bool(bad)

else:  # pragma: no cover
    horner_numba = horner_numpy
    horner_derivative_numba = horner_derivative_numpy
    weighted_abs_max_numba = weighted_abs_max_numpy


def _as_arrays(coeffs, z):
    return (np.ascontiguousarray(coeffs, dtype=np.complex128),
            np.ascontiguousarray(np.ravel(z), dtype=np.complex128))


def horner(coeffs, z, use_numba=None):
    """Dispatching Horner evaluation; preserves the shape of ``z``."""
    use_numba = USE_NUMBA if use_numba is None else use_numba
    shape = np.shape(z)
    c, zz = _as_arrays(coeffs, z)
    fn = horner_numba if use_numba else horner_numpy
    return fn(c, zz).reshape(shape)


def horner_derivative(coeffs, z, k, use_numba=None):
    use_numba = USE_NUMBA if use_numba is None else use_numba
    shape = np.shape(z)
    c, zz = _as_arrays(coeffs, z)
    fn = horner_derivative_numba if use_numba else horner_derivative_numpy
    return fn(c, zz, int(k)).reshape(shape)


def weighted_abs_max(values, weights, use_numba=None):
    use_numba = USE_NUMBA if use_numba is None else use_numba
    v = np.ascontiguousarray(np.ravel(values), dtype=np.complex128)
    w = np.ascontiguousarray(np.ravel(weights), dtype=np.float64)
    fn = weighted_abs_max_numba if use_numba else weighted_abs_max_numpy
    return fn(v, w)
