"""Analytic functions on the unit disk.

Two kinds of objects live here:

* :class:`TaylorFunction` -- a truncated power series about 0.  All arithmetic
  is exact on the stored coefficients.
* closed forms (:class:`Mobius`, :class:`ProbeKernel`, :class:`Power`) that
  evaluate themselves and their derivatives directly.

Both follow the same informal protocol used throughout the package::

    f(z)                -> values (vectorised over numpy arrays)
    f.derivative(k)     -> another evaluable object
    f.closed_disk       -> True if f extends continuously to |z| <= 1
"""
from dataclasses import dataclass, field, replace
from math import factorial

import numpy as np
from scipy.special import gammaln, poch

from . import _kernels
from .errors import DomainError

# |a| cap for the probe families; truncation cost grows like 1/(1-|a|).
A_CAP = 0.999
SERIES_TOL = 1e-10
_MAX_DEGREE = 400_000


def _to_complex(z):
    if isinstance(z, DiskPoint):
        return z.z
    return np.asarray(z, dtype=np.complex128) if np.ndim(z) else complex(z)


@dataclass(frozen=True)
class DiskPoint:
    """A point strictly inside the unit disk."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not np.isfinite(z) or abs(z) >= 1.0:
            raise DomainError(f"|z| must be < 1, got |z| = {abs(z)!r}")
        object.__setattr__(self, "z", z)

    def __complex__(self):
        return self.z

    def __abs__(self):
        return abs(self.z)


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------

def _frozen(a):
    a = np.array(a, dtype=np.complex128).ravel()
    if a.size == 0:
        a = np.zeros(1, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TaylorFunction:
    """Taylor coefficients c_0..c_N about the origin.

    ``tail_bound`` (optional) bounds the modulus of the discarded tail on the
    closed disk; it is carried along by linear operations and dropped by
    operations that cannot track it.
    """

    coeffs: np.ndarray
    tail_bound: float = None
    closed_disk: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))
        if self.tail_bound is not None and not self.tail_bound >= 0:
            raise DomainError("tail_bound must be non-negative")

    @property
    def degree(self):
        return self.coeffs.size - 1

    # evaluation ----------------------------------------------------------
    def __call__(self, z):
        return self._eval(z, 0)

    def _eval(self, z, k):
        zz = _to_complex(z)
        scalar = np.ndim(zz) == 0
        arr = np.atleast_1d(np.asarray(zz, dtype=np.complex128))
        c = self.coeffs
        nz = np.flatnonzero(c[k:] if k else c)
        if k:
            nz = nz + k
        if nz.size <= 8 and self.degree > 32:
            # sparse fast path; monomials of high degree
            out = np.zeros(arr.shape, dtype=np.complex128)
            for m in nz:
                fall = float(np.prod(np.arange(m - k + 1, m + 1, dtype=np.float64)))
                out += c[m] * fall * arr ** (m - k)
        elif k:
            out = _kernels.horner_derivative(c, arr, k)
        else:
            out = _kernels.horner(c, arr)
        return complex(out[0]) if scalar else out

    def derivative(self, k=1):
        return derivative(self, k)

    # arithmetic -----------------------------------------------------------
    def _bound_with(self, other):
        if self.tail_bound is None and other.tail_bound is None:
            return None
        return (self.tail_bound or 0.0) + (other.tail_bound or 0.0)

    def __add__(self, other):
        if np.isscalar(other):
            other = TaylorFunction([other])
        n = max(self.coeffs.size, other.coeffs.size)
        c = np.zeros(n, dtype=np.complex128)
        c[: self.coeffs.size] += self.coeffs
        c[: other.coeffs.size] += other.coeffs
        return TaylorFunction(c, self._bound_with(other))

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TaylorFunction):
            c = np.convolve(self.coeffs, other.coeffs)
            if self.tail_bound is not None or other.tail_bound is not None:
                # beyond the shorter truncation the product is not known
                c = c[: min(self.coeffs.size, other.coeffs.size)]
            return TaylorFunction(c)
        s = complex(other)
        tb = None if self.tail_bound is None else self.tail_bound * abs(s)
        return TaylorFunction(self.coeffs * s, tb)

    __rmul__ = __mul__

    def __repr__(self):
        return f"TaylorFunction(degree={self.degree}, tail_bound={self.tail_bound})"


def evaluate(f, z):
    """Value of ``f`` at ``z`` (a :class:`DiskPoint`, a complex, or an array)."""
    return f(_to_complex(z))


def derivative(f, k=1):
    """k-th derivative; coefficient m of the result is (m+k)!/m! * c_{m+k}."""
    k = int(k)
    if k < 0:
        raise DomainError("derivative order must be >= 0")
    if not isinstance(f, TaylorFunction):
        return f.derivative(k)
    if k == 0:
        return f
    c = f.coeffs
    if k > f.degree:
        return TaylorFunction([0.0])
    m = np.arange(c.size - k, dtype=np.float64)
    fall = np.ones(c.size - k)
    for i in range(1, k + 1):
        fall *= m + i
    return TaylorFunction(c[k:] * fall, None)


def monomial(n):
    """p_n(z) = z**n."""
    n = int(n)
    if n < 0:
        raise DomainError("monomial degree must be >= 0")
    c = np.zeros(n + 1, dtype=np.complex128)
    c[n] = 1.0
    return TaylorFunction(c)


def polynomial(coeffs):
    return TaylorFunction(coeffs)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mobius:
    """The involutive disk automorphism z -> (a - z) / (1 - conj(a) z).

    ``order`` > 0 represents that derivative of the map.
    """

    a: complex
    order: int = 0
    closed_disk: bool = field(default=True, repr=False)

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) >= 1.0:
            raise DomainError(f"automorphism parameter must satisfy |a| < 1, got {abs(a)!r}")
        object.__setattr__(self, "a", a)

    def __call__(self, z):
        z = _to_complex(z)
        a, ab = self.a, self.a.conjugate()
        den = 1.0 - ab * z
        j = self.order
        if j == 0:
            return (a - z) / den
        return (abs(a) ** 2 - 1.0) * factorial(j) * ab ** (j - 1) / den ** (j + 1)

    def derivative(self, k=1):
        return replace(self, order=self.order + int(k))


def mobius(a):
    """Return the automorphism exchanging ``a`` and 0."""
    return Mobius(complex(_to_complex(a)))


def pseudo_distance(z, w):
    """|(z - w) / (1 - conj(z) w)|, the pseudohyperbolic distance."""
    z = complex(_to_complex(z))
    w = complex(_to_complex(w))
    if abs(z) >= 1 or abs(w) >= 1:
        raise DomainError("points must lie strictly inside the unit disk")
    return abs(z - w) / abs(1.0 - z.conjugate() * w)


@dataclass(frozen=True)
class Power:
    """z -> z**n and its derivatives, evaluated by direct powers."""

    n: int
    order: int = 0
    closed_disk: bool = field(default=True, repr=False)

    def __call__(self, z):
        z = _to_complex(z)
        m = self.n - self.order
        if m < 0:
            return np.zeros_like(z) if np.ndim(z) else 0j
        fall = float(np.prod(np.arange(m + 1, self.n + 1, dtype=np.float64)))
        return fall * np.power(z, m)

    def derivative(self, k=1):
        return replace(self, order=self.order + int(k))


@dataclass(frozen=True)
class ProbeKernel:
    """Closed form of (1-|a|^2)^g (a - z)^k (1 - conj(a) z)^-(2g + k).

    This equals ((1-|a|^2) / (1-conj(a) z)^2)^g times the k-th power of the
    automorphism at ``a``.  Non-integer powers use the principal logarithm of
    1 - conj(a) z, whose real part is positive on the closed disk.
    ``order`` selects a derivative, computed by the Leibniz rule.
    """

    a: complex
    gamma: float
    k: int = 0
    order: int = 0
    closed_disk: bool = field(default=True, repr=False)

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) >= 1:
            raise DomainError("anchor must satisfy |a| < 1")
        if not self.gamma >= 0:
            raise DomainError(f"exponent must be >= 0, got {self.gamma!r}")
        if self.k < 0:
            raise DomainError("automorphism power must be >= 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "gamma", float(self.gamma))

    @property
    def exponent(self):
        return 2.0 * self.gamma + self.k

    def derivative(self, k=1):
        return replace(self, order=self.order + int(k))

    def __call__(self, z):
        z = _to_complex(z)
        a, ab, s, k, d = self.a, self.a.conjugate(), self.exponent, self.k, self.order
        scale = (1.0 - abs(a) ** 2) ** self.gamma
        u = 1.0 - ab * z
        logu = np.log(u)
        out = 0.0
        # d^i (a-z)^k = (-1)^i k!/(k-i)! (a-z)^(k-i);
        # d^m u^-s = poch(s, m) conj(a)^m u^-(s+m)
        for i in range(min(k, d) + 1):
            m = d - i
            left = (-1) ** i * factorial(k) / factorial(k - i) * (a - z) ** (k - i)
            right = poch(s, m) * ab ** m * np.exp(-(s + m) * logu) if (s or m) else 1.0
            out = out + _binom(d, i) * left * right
        return scale * out

    def local_coefficients(self, order):
        """Taylor coefficients about the anchor ``a`` itself, up to ``order``.

        Around the anchor the function is
        (-h)^k (1-|a|^2)^(g-s) (1 - conj(a) h / (1-|a|^2))^-s, so the first k
        coefficients vanish identically.
        """
        a, g, k, s = self.a, self.gamma, self.k, self.exponent
        r2 = 1.0 - abs(a) ** 2
        out = np.zeros(order + 1, dtype=np.complex128)
        m = np.arange(max(order - k + 1, 0))
        if m.size:
            ratio = a.conjugate() / r2
            mag = np.exp(gammaln(s + m) - gammaln(s) - gammaln(m + 1)) if s > 0 else (m == 0) * 1.0
            out[k:] = (-1) ** k * r2 ** (g - s) * mag * ratio ** m
        return out


def _binom(n, k):
    return factorial(n) // (factorial(k) * factorial(n - k))


# ---------------------------------------------------------------------------
# Series versions of the probe families
# ---------------------------------------------------------------------------

def adaptive_degree(abs_a, gamma, k, tol=SERIES_TOL):
    """Smallest N with |a|^(N+1) (N+1)^max(2g+k-1, 0) / (1-|a|) < tol."""
    if abs_a == 0:
        return int(k)
    p = max(2.0 * gamma + k - 1.0, 0.0)
    n = np.arange(k, _MAX_DEGREE, dtype=np.float64)
    logv = (n + 1) * np.log(abs_a) + p * np.log(n + 1) - np.log1p(-abs_a)
    hit = np.flatnonzero(logv < np.log(tol))
    if hit.size == 0:
        raise DomainError(f"|a| = {abs_a} needs a series longer than {_MAX_DEGREE}")
    return int(n[hit[0]])


def binomial_series(abs_or_a, s, n_terms):
    """Coefficients of (1 - conj(a) z)^-s, l = 0..n_terms-1, via log-gamma."""
    a = complex(abs_or_a)
    l = np.arange(n_terms, dtype=np.float64)
    out = np.zeros(n_terms, dtype=np.complex128)
    if s == 0:
        out[0] = 1.0
        return out
    if a == 0:
        out[0] = 1.0
        return out
    logmag = gammaln(l + s) - gammaln(s) - gammaln(l + 1) + l * np.log(abs(a))
    phase = np.exp(-1j * l * np.angle(a))  # conj(a)^l
    return np.exp(logmag) * phase


def _tail_bound(abs_a, gamma, k, n_deg):
    """Crude bound on sum_{l > N} |coefficient_l| for the probe series."""
    if abs_a == 0:
        return 0.0
    s = 2.0 * gamma + k
    start = max(n_deg - k + 1, 0)
    first = np.exp(gammaln(start + s) - gammaln(s) - gammaln(start + 1) + start * np.log(abs_a)) if s else 0.0
    q = abs_a * max(1.0, (start + s) / (start + 1.0))
    if q >= 1:
        return np.inf
    return float((1 - abs_a**2) ** gamma * (1 + abs_a) ** k * first / (1 - q))


def test_function(a, gamma, k=0, N=None):
    """Truncated series of (1-|a|^2)^g (a-z)^k / (1-conj(a) z)^(2g+k).

    ``N`` defaults to :func:`adaptive_degree`.  Rejects negative ``gamma``.
    """
    a = complex(_to_complex(a))
    if not gamma >= 0:
        raise DomainError(f"exponent must be >= 0, got {gamma!r}")
    if abs(a) >= 1:
        raise DomainError("anchor must satisfy |a| < 1")
    if abs(a) > A_CAP:
        raise DomainError(f"|a| is capped at {A_CAP} for series probes")
    k = int(k)
    if N is None:
        N = adaptive_degree(abs(a), gamma, k)
    N = int(N)
    s = 2.0 * gamma + k
    r2 = 1.0 - abs(a) ** 2
    if k and abs(a) >= 0.5:
        # a - z = (-(1-|a|^2) + (1 - conj(a) z)) / conj(a) turns the product
        # into a sum of binomial series; multiplying out (a - z)^k against
        # one series instead cancels badly as |a| -> 1
        c = np.zeros(N + 1, dtype=np.complex128)
        for j in range(k + 1):
            c += _binom(k, j) * (-r2) ** (k - j) * binomial_series(a, s - j, N + 1)
        c /= a.conjugate() ** k
    else:
        # (a - z)^k = sum_j C(k,j) a^(k-j) (-z)^j
        lead = np.array([_binom(k, j) * a ** (k - j) * (-1) ** j for j in range(k + 1)],
                        dtype=np.complex128)
        c = np.convolve(binomial_series(a, s, N + 1), lead)[: N + 1]
    c *= r2 ** gamma
    return TaylorFunction(c, _tail_bound(abs(a), gamma, k, N))


test_function.__test__ = False  # keep pytest from collecting it


def proof_probe(w, gamma, k, N=None):
    """The probe anchored at ``w``: vanishes to order k there, k-th derivative
    of modulus k!/(1-|w|^2)^(k+gamma)."""
    return test_function(w, gamma, k, N)


def recenter(f, w, order, radius=None, n_points=128):
    """Taylor coefficients of ``f`` about ``w``, up to ``order``.

    Computed from samples on a small circle around ``w`` (a discrete Cauchy
    integral, i.e. an FFT), which stays well conditioned for the
    high-degree series the probes need.
    """
    w = complex(_to_complex(w))
    if radius is None:
        radius = 0.5 * (1.0 - abs(w))
    n_points = max(int(n_points), 2 * (order + 1))
    theta = 2.0 * np.pi * np.arange(n_points) / n_points
    vals = np.asarray(f(w + radius * np.exp(1j * theta)), dtype=np.complex128)
    coef = np.fft.fft(vals) / n_points
    j = np.arange(order + 1)
    return coef[: order + 1] / radius ** j


def derivatives_at(f, w, order, **kw):
    """f^(j)(w) for j = 0..order via :func:`recenter`."""
    b = recenter(f, w, order, **kw)
    fact = np.array([factorial(j) for j in range(order + 1)], dtype=np.float64)
    return b * fact


def anchored_probe_derivatives(w, gamma, k, order):
    """g^(i)(w) for i = 0..order, where g is the probe anchored at w itself.

    Vectorised over the array ``w``; row i of the result holds the i-th
    derivative.  Rows below k vanish identically.
    """
    w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    s = 2.0 * gamma + k
    r2 = 1.0 - np.abs(w) ** 2
    out = np.zeros((order + 1, w.size), dtype=np.complex128)
    base = (-1) ** k * r2 ** (gamma - s)
    ratio = np.conj(w) / r2
    for i in range(k, order + 1):
        m = i - k
        out[i] = factorial(i) * base * (poch(s, m) / factorial(m)) * ratio ** m
    return out
