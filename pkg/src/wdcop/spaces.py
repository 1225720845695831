"""Source spaces, target weights and their norm estimators.

Norms are computed for any object following the protocol of
:mod:`wdcop.analytic` (callable, ``closed_disk`` flag, optional ``degree``).

Quadrature
----------
* Hardy: trapezoid rule on circles |z| = r (spectrally accurate for smooth
  periodic integrands), on the ladder r_j = 1 - 2^-j plus r = 1 when the
  function extends continuously to the closed disk.
* Bergman: trapezoid in angle times Gauss-Jacobi in t = r^2 against
  (1 - t)^alpha, so the boundary concentration of the weight is integrated
  exactly by the rule.
* Weighted sup: radial shells r_j = 1 - 2^-j crossed with angle counts that
  double per shell up to a cap, followed by a compass search around the best
  grid point.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy import integrate
from scipy.special import roots_jacobi

from . import _kernels, _ladder
from .analytic import Power, monomial
from .errors import DomainError

HINF = "HINF"
GROWTH = "GROWTH"
BERGMAN = "BERGMAN"
HARDY = "HARDY"
KINDS = (HINF, GROWTH, BERGMAN, HARDY)


@dataclass(frozen=True)
class SpaceSpec:
    """One of the four source spaces.

    ``alpha`` is the growth order for GROWTH and the weight exponent for
    BERGMAN; ``p`` is the integrability exponent for BERGMAN and HARDY.
    """

    kind: str
    p: Optional[float] = None
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown space kind {self.kind!r}")
        if self.kind in (BERGMAN, HARDY):
            if self.p is None or not (self.p > 0 and math.isfinite(self.p)):
                raise DomainError(f"{self.kind} needs p > 0, got {self.p!r}")
        if self.kind == GROWTH and (self.alpha is None or not self.alpha > 0):
            raise DomainError(f"GROWTH needs alpha > 0, got {self.alpha!r}")
        if self.kind == BERGMAN and (self.alpha is None or not self.alpha > -1):
            raise DomainError(f"BERGMAN needs alpha > -1, got {self.alpha!r}")

    @classmethod
    def hinf(cls):
        return cls(HINF)

    @classmethod
    def growth(cls, alpha):
        return cls(GROWTH, alpha=float(alpha))

    @classmethod
    def bergman(cls, p, alpha):
        return cls(BERGMAN, p=float(p), alpha=float(alpha))

    @classmethod
    def hardy(cls, p):
        return cls(HARDY, p=float(p))

    @property
    def growth_exponent(self):
        return growth_exponent(self)

    @property
    def label(self):
        if self.kind == HINF:
            return "H^inf"
        if self.kind == GROWTH:
            return f"A^-{self.alpha:g}"
        if self.kind == BERGMAN:
            return f"A^{self.p:g}_{self.alpha:g}"
        return f"H^{self.p:g}"


def growth_exponent(space):
    """Common exponent of the pointwise growth bound for ``space``.

    0 for H^inf, alpha for A^-alpha, (alpha + 2)/p for A^p_alpha, 1/p for H^p.
    """
    if space.kind == HINF:
        return 0.0
    if space.kind == GROWTH:
        return float(space.alpha)
    if space.kind == BERGMAN:
        return (space.alpha + 2.0) / space.p
    return 1.0 / space.p


# ---------------------------------------------------------------------------
# Target weights
# ---------------------------------------------------------------------------

POWER = "POWER"
SAMPLED = "SAMPLED"


@dataclass(frozen=True, eq=False)
class Weight:
    """Radial weight nu on the disk: (1-|z|^2)^beta or an interpolated table."""

    form: str
    beta: float = 0.0
    radii: tuple = ()
    values: tuple = ()
    label: str = ""
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.form == POWER:
            if not (self.beta >= 0 and math.isfinite(self.beta)):
                raise DomainError(f"power weight needs beta >= 0, got {self.beta!r}")
            if not self.label:
                object.__setattr__(self, "label", f"(1-|z|^2)^{self.beta:g}")
        elif self.form == SAMPLED:
            r = np.asarray(self.radii, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if r.ndim != 1 or r.size < 2 or r.size != v.size:
                raise DomainError("sampled weight needs matching radii/values of length >= 2")
            if np.any(np.diff(r) <= 0) or r[0] < 0 or r[-1] > 1:
                raise DomainError("sampled weight radii must increase within [0, 1]")
            if np.any(v <= 0) or not np.all(np.isfinite(v)):
                raise DomainError("sampled weight values must be positive and finite")
            object.__setattr__(self, "radii", tuple(r.tolist()))
            object.__setattr__(self, "values", tuple(v.tolist()))
            object.__setattr__(self, "_interp", PchipInterpolator(r, v, extrapolate=False))
            if not self.label:
                object.__setattr__(self, "label", "sampled")
        else:
            raise DomainError(f"unknown weight form {self.form!r}")

    @classmethod
    def power(cls, beta, label=""):
        return cls(POWER, beta=float(beta), label=label)

    @classmethod
    def unit(cls):
        return cls(POWER, beta=0.0, label="1")

    @classmethod
    def sampled(cls, radii, values, label=""):
        return cls(SAMPLED, radii=tuple(radii), values=tuple(values), label=label)

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        if self.form == POWER:
            if self.beta == 0:
                return np.ones_like(r)
            return np.maximum(1.0 - r * r, 0.0) ** self.beta
        rr = np.clip(r, self.radii[0], self.radii[-1])
        return self._interp(rr)

    def __call__(self, z):
        return self.radial(np.abs(z))

    def to_dict(self):
        if self.form == POWER:
            return {"form": POWER, "beta": self.beta, "label": self.label}
        return {"form": SAMPLED, "radii": list(self.radii), "values": list(self.values),
                "label": self.label}


# ---------------------------------------------------------------------------
# Numerical configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureConfig:
    n_angles: int = 1024
    n_radii: int = 128
    r_max: float = 1.0 - 1e-6
    max_angles: int = 1 << 15
    max_radii: int = 2048

    def __post_init__(self):
        n = self.n_angles
        if n < 64 or n & (n - 1):
            raise DomainError(f"n_angles must be a power of two >= 64, got {n}")
        if self.n_radii < 2:
            raise DomainError("n_radii must be >= 2")
        if not 0 < self.r_max <= 1.0 - 1e-6:
            raise DomainError("r_max must lie in (0, 1 - 1e-6]")

    def doubled(self):
        return QuadratureConfig(2 * self.n_angles, 2 * self.n_radii, self.r_max,
                                2 * self.max_angles, 2 * self.max_radii)


@dataclass(frozen=True)
class DiskGrid:
    """Shells r_j = 1 - 2^-j (j = 1..shells), the origin, optionally |z| = 1.

    Shell j carries min(angles, max(min_angles, 2^(j+5))) equispaced angles
    starting at 0.  ``extra_points`` are appended verbatim.
    """

    shells: int = 16
    angles: int = 1024
    min_angles: int = 64
    include_boundary: bool = True
    refine_levels: int = 40
    extra_points: tuple = ()

    def __post_init__(self):
        if self.shells < 1 or self.angles < 4 or self.min_angles < 4:
            raise DomainError("grid needs at least one shell and four angles")

    @property
    def radii(self):
        return 1.0 - 2.0 ** -np.arange(1, self.shells + 1, dtype=float)

    def n_angles(self, j):
        return int(min(self.angles, max(self.min_angles, 2 ** (j + 5))))

    def shell(self, j):
        """Points on shell j (1-based)."""
        r = 1.0 - 2.0 ** -j
        n = self.n_angles(j)
        return r * np.exp(2j * np.pi * np.arange(n) / n)

    def boundary(self):
        return np.exp(2j * np.pi * np.arange(self.angles) / self.angles)

    def points(self):
        parts = [np.zeros(1, dtype=np.complex128)]
        parts += [self.shell(j) for j in range(1, self.shells + 1)]
        if self.include_boundary:
            parts.append(self.boundary())
        if self.extra_points:
            parts.append(np.asarray(self.extra_points, dtype=np.complex128))
        return np.concatenate(parts)

    def with_points(self, pts):
        return DiskGrid(self.shells, self.angles, self.min_angles, self.include_boundary,
                        self.refine_levels, tuple(self.extra_points) + tuple(complex(p) for p in pts))

    def refined(self, extra_shells=4):
        return DiskGrid(self.shells + extra_shells, 2 * self.angles, self.min_angles,
                        self.include_boundary, self.refine_levels, self.extra_points)


class SupEstimate(NamedTuple):
    value: float
    argmax: complex
    divergent: bool

    def __float__(self):
        return float(self.value)


def _radial_coord(z):
    r = abs(z)
    if r >= 1.0:
        return math.inf
    return -math.log2(1.0 - r)


def compass_refine(objective, z0, best, grid, ds=1.0, dtheta=None):
    """Pattern search on (s, theta) with r = 1 - 2^-s around ``z0``.

    ``objective`` maps a complex array to real values.  Returns the improved
    (value, point).  Points on the boundary circle move in angle only.
    """
    s0 = _radial_coord(z0)
    on_boundary = math.isinf(s0)
    th0 = math.atan2(z0.imag, z0.real)
    if dtheta is None:
        dtheta = 2.0 * math.pi / grid.angles
    s_cap = grid.shells + 8.0
    halvings = 0
    steps = 0
    while halvings < grid.refine_levels and steps < 25 * grid.refine_levels + 50:
        steps += 1
        if on_boundary:
            th = th0 + dtheta * np.array([-1.0, 1.0])
            cand = np.exp(1j * th)
        else:
            ss = np.clip(s0 + ds * np.array([-1.0, 0.0, 1.0]), 0.0, s_cap)
            S, T = np.meshgrid(ss, th0 + dtheta * np.array([-1.0, 0.0, 1.0]))
            S, T = S.ravel(), T.ravel()
            cand = (1.0 - 2.0 ** -S) * np.exp(1j * T)
        vals = np.asarray(objective(cand), dtype=float)
        if not np.all(np.isfinite(vals)):
            i = int(np.flatnonzero(~np.isfinite(vals))[0])
            return math.inf, complex(cand[i])
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            z0 = complex(cand[i])
            th0 = math.atan2(z0.imag, z0.real)
            if not on_boundary:
                s0 = _radial_coord(z0) if abs(z0) > 0 else 0.0
            # a successful move may lengthen the step again
            if halvings:
                ds, dtheta, halvings = 2.0 * ds, 2.0 * dtheta, halvings - 1
        else:
            ds *= 0.5
            dtheta *= 0.5
            halvings += 1
    return best, z0


def weighted_sup_norm(f, weight, grid=None, refine=True):
    """sup_z weight(z) |f(z)| estimated on ``grid`` with local refinement.

    Non-finite evaluations are reported through ``SupEstimate.divergent``
    instead of raising.
    """
    grid = grid or DiskGrid()
    pts = grid.points()
    if not grid.include_boundary and np.any(np.abs(pts) >= 1):
        pts = pts[np.abs(pts) < 1]
    with np.errstate(all="ignore"):
        vals = f(pts)
        w = weight(pts)
    best, idx, bad = _kernels.weighted_abs_max(vals, w)
    if bad:
        return SupEstimate(math.inf, complex(pts[idx]), True)
    z0 = complex(pts[idx])
    if refine and grid.refine_levels > 0:
        def objective(z):
            with np.errstate(all="ignore"):
                return weight(z) * np.abs(f(z))
        best, z0 = compass_refine(objective, z0, best, grid)
        if math.isinf(best):
            return SupEstimate(math.inf, z0, True)
    return SupEstimate(float(best), z0, False)


# ---------------------------------------------------------------------------
# Integral norms
# ---------------------------------------------------------------------------

def _pow2_at_least(n):
    return 1 << max(int(n - 1).bit_length(), 0)


def _even_integer(p):
    return float(p).is_integer() and int(p) % 2 == 0


def _angles_for(f, q, p=2.0):
    # for even p and a polynomial, |f|^p is a trigonometric polynomial of
    # degree p*deg/2, and the trapezoid rule is exact once n exceeds it
    deg = getattr(f, "degree", None)
    n = q.n_angles
    if deg is not None:
        n = max(n, _pow2_at_least(int(math.ceil(max(p, 2.0) * deg)) + 2))
    return min(n, q.max_angles)


_ANGLE_RTOL = 1e-12
_RADIAL_RTOL = 1e-10


def _converged_means(f, p, radii, q, rtol=_ANGLE_RTOL):
    """Circle means with angular doubling until they stop changing.

    Even p on a polynomial needs no doubling.  Otherwise |f|^p is only as
    smooth as the distance from the zeros of f to the circle allows, and the
    trapezoid rule is doubled up to ``q.max_angles``.
    """
    n = _angles_for(f, q, p)
    means = circle_means(f, p, radii, n)
    if _even_integer(p) and getattr(f, "degree", None) is not None:
        return means
    while 2 * n <= q.max_angles:
        n *= 2
        finer = circle_means(f, p, radii, n)
        done = np.all(np.abs(finer - means) <= rtol * np.maximum(np.abs(finer), 1e-300))
        means = finer
        if done:
            break
    return means


def _check_finite(vals):
    if not np.all(np.isfinite(vals)):
        raise DomainError("non-finite function values in norm quadrature")
    return vals


def circle_means(f, p, radii, n_angles):
    """(1/n) sum_j |f(r e^{2 pi i j/n})|^p for each r in ``radii``."""
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    ring = np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    pts = (radii[:, None] * ring[None, :]).ravel()
    vals = _check_finite(np.abs(f(pts)).reshape(radii.size, n_angles))
    return np.mean(vals ** p, axis=1)


def hardy_radii(f, q=None, n_ladder=20):
    q = q or QuadratureConfig()
    r = 1.0 - 2.0 ** -np.arange(1, n_ladder + 1, dtype=float)
    r = r[r <= q.r_max]
    if getattr(f, "closed_disk", False):
        r = np.append(r, 1.0)
    return r


def hardy_norm(f, p, q=None):
    """H^p norm: p-th root of the sup over radii of the circle means of |f|^p."""
    if not p > 0:
        raise DomainError("p must be > 0")
    q = q or QuadratureConfig()
    means = _converged_means(f, p, hardy_radii(f, q), q)
    return float(np.max(means) ** (1.0 / p))


def _radial_rule(alpha, n):
    """Nodes t in (0,1) and weights for int_0^1 (alpha+1)(1-t)^alpha g(t) dt."""
    x, w = roots_jacobi(n, alpha, 0.0)
    t = 0.5 * (x + 1.0)
    w = w * (alpha + 1.0) / 2.0 ** (alpha + 1.0)
    return t, w


def bergman_norm(f, p, alpha, q=None):
    """A^p_alpha norm against the probability measure (alpha+1)(1-|z|^2)^alpha dA.

    In t = |z|^2 the radial integrand is a polynomial when p is even and f is
    a polynomial, so Gauss-Jacobi is exact.  For other p the circle means
    have weak singularities where zeros of f cross a circle and the radial
    integral is done adaptively.
    """
    if not p > 0:
        raise DomainError("p must be > 0")
    if not alpha > -1:
        raise DomainError(f"alpha must be > -1, got {alpha!r}")
    q = q or QuadratureConfig()
    if not _even_integer(p):
        def radial(t):
            return float(_converged_means(f, p, [math.sqrt(t)], q, _RADIAL_RTOL)[0])
        val, _ = integrate.quad(radial, 0.0, 1.0, weight="alg", wvar=(0.0, alpha),
                                epsabs=0.0, epsrel=_RADIAL_RTOL, limit=q.n_radii)
        return float(((alpha + 1.0) * val) ** (1.0 / p))
    n_rad = q.n_radii
    deg = getattr(f, "degree", None)
    if deg is not None:
        n_rad = max(n_rad, int(math.ceil(deg * max(p, 2.0) / 4.0)) + 8)
    n_rad = min(n_rad, q.max_radii)
    t, w = _radial_rule(alpha, n_rad)
    means = _converged_means(f, p, np.sqrt(t), q)
    return float(np.dot(w, means) ** (1.0 / p))


def norm(f, space, q=None, grid=None):
    """Norm of ``f`` in ``space``; sup-type spaces go through the weighted sup."""
    if space.kind == HINF:
        return weighted_sup_norm(f, Weight.unit(), grid).value
    if space.kind == GROWTH:
        return weighted_sup_norm(f, Weight.power(space.alpha), grid).value
    if space.kind == BERGMAN:
        return bergman_norm(f, space.p, space.alpha, q)
    return hardy_norm(f, space.p, q)


# ---------------------------------------------------------------------------
# Checks of the growth estimates
# ---------------------------------------------------------------------------

class ExponentFit(NamedTuple):
    slope: float
    max_residual: float
    n: tuple
    norms: tuple


def monomial_norm_exponent(space, n_list=None, q=None, grid=None):
    """Least-squares slope of log ||z^n|| against log n."""
    if n_list is None:
        n_list = [2 ** i for i in range(2, 9)]
    n = np.asarray(n_list, dtype=float)
    norms = []
    for m in n_list:
        f = Power(int(m)) if space.kind in (HINF, GROWTH) else monomial(int(m))
        norms.append(norm(f, space, q, grid))
    x, y = np.log(n), np.log(norms)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return ExponentFit(float(coef[0]), float(np.max(np.abs(resid))), tuple(int(m) for m in n_list),
                       tuple(float(v) for v in norms))


class GrowthConstant(NamedTuple):
    value: float
    status: str
    shell_trace: tuple


def growth_bound_constant(space, k, probes, grid=None, q=None):
    """sup over probes and grid of |f^(k)(z)| (1-|z|^2)^(k+gamma) / ||f||.

    The per-shell running supremum is classified like every other ladder in
    the package; a DIVERGENT status would contradict the growth estimate.
    """
    grid = grid or DiskGrid()
    g = growth_exponent(space)
    shells = [np.zeros(1, dtype=np.complex128)] + [grid.shell(j) for j in range(1, grid.shells + 1)]
    if grid.include_boundary:
        # the weight vanishes on |z| = 1 unless k + gamma = 0
        shells.append(grid.boundary())
    running = np.zeros(len(shells))
    for f in probes:
        nf = norm(f, space, q)
        if not nf > 1e-300:
            raise DomainError("probe functions must have non-zero norm")
        d = f.derivative(k)
        for i, pts in enumerate(shells):
            w = np.maximum(1.0 - np.abs(pts) ** 2, 0.0) ** (k + g)
            with np.errstate(all="ignore"):
                val, _, bad = _kernels.weighted_abs_max(d(pts), w)
            val = math.inf if bad else val / nf
            running[i] = max(running[i], val)
    running = np.maximum.accumulate(running)
    trend = _ladder.classify(running[1:])
    return GrowthConstant(float(running[-1]), trend.status, tuple(float(v) for v in running))


__all__ = [
    "HINF", "GROWTH", "BERGMAN", "HARDY", "SpaceSpec", "growth_exponent", "Weight",
    "QuadratureConfig", "DiskGrid", "SupEstimate", "weighted_sup_norm", "hardy_norm",
    "bergman_norm", "circle_means", "norm", "monomial_norm_exponent", "growth_bound_constant",
]
