"""The operator f -> sum_k u_k (f^(k) o tau) and estimates of its size."""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .analytic import Power, ProbeKernel, TaylorFunction, _to_complex
from .errors import DomainError, SelfMapViolation
from .spaces import DiskGrid, compass_refine, growth_exponent, norm, weighted_sup_norm

SELF_MAP_TOL = 1e-9
BOUNDARY_EPS = 1e-12


class SelfMapCheck(NamedTuple):
    sup: float
    strict: bool
    argmax: complex


def self_map_check(tau, grid=None):
    """Estimate sup |tau| over the disk and decide strict vs boundary-touching.

    Raises :class:`SelfMapViolation` if the estimate exceeds 1 + 1e-9.
    """
    grid = grid or DiskGrid()
    g = grid if getattr(tau, "closed_disk", False) else DiskGrid(
        grid.shells, grid.angles, grid.min_angles, False, grid.refine_levels, grid.extra_points)
    pts = g.points()
    vals = np.abs(np.asarray(tau(pts), dtype=np.complex128))
    if not np.all(np.isfinite(vals)):
        raise SelfMapViolation("self-map is not finite on the disk")
    i = int(np.argmax(vals))
    best, z0 = compass_refine(lambda z: np.abs(tau(z)), complex(pts[i]), float(vals[i]), g)
    if best > 1.0 + SELF_MAP_TOL:
        raise SelfMapViolation(f"sup |tau| ~ {best:.12g} exceeds 1 (near z = {z0:.6g})")
    if abs(complex(tau(0.0))) >= 1.0:
        raise SelfMapViolation("tau(0) lies on or outside the unit circle")
    return SelfMapCheck(min(best, 1.0), best < 1.0 - SELF_MAP_TOL, z0)


ZERO = TaylorFunction([0.0])


def _is_zero(u):
    return isinstance(u, TaylorFunction) and not np.any(u.coeffs)


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    """Symbols u_0..u_n and self-map tau, validated by :func:`self_map_check`."""

    symbols: tuple
    tau: object
    tau_sup: float
    strict: bool

    @classmethod
    def build(cls, symbols, tau, grid=None):
        symbols = tuple(symbols)
        if not symbols:
            raise DomainError("need at least one symbol (n >= 0)")
        chk = self_map_check(tau, grid)
        return cls(symbols, tau, chk.sup, chk.strict)

    @property
    def n(self):
        return len(self.symbols) - 1

    def single_term(self, k):
        """The operator keeping only u_k (all other symbols replaced by 0)."""
        syms = tuple(u if i == k else ZERO for i, u in enumerate(self.symbols))
        return OperatorSpec(syms, self.tau, self.tau_sup, self.strict)

    def scaled_tau(self, factor):
        """Same symbols, tau replaced by factor * tau (|factor| < 1 gives a strict map)."""
        tau = self.tau
        return OperatorSpec(self.symbols, _Scaled(tau, factor), abs(factor) * self.tau_sup,
                            abs(factor) * self.tau_sup < 1.0 - SELF_MAP_TOL)


@dataclass(frozen=True)
class _Scaled:
    f: object
    factor: complex
    closed_disk: bool = True

    def __call__(self, z):
        return self.factor * self.f(z)


def apply(S, f, z):
    """(S f)(z) = sum_k u_k(z) f^(k)(tau(z)); vectorised over ``z``.

    Where |tau(z)| >= 1 - 1e-12 and ``f`` does not extend to the closed disk
    the value is NaN, which the sup estimators report as divergence.
    """
    z = _to_complex(z)
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    w = np.asarray(S.tau(zz), dtype=np.complex128)
    out = np.zeros(zz.shape, dtype=np.complex128)
    for k, u in enumerate(S.symbols):
        if _is_zero(u):
            continue
        dk = f.derivative(k) if k else f
        out += np.asarray(u(zz)) * np.asarray(dk(w))
    if not getattr(f, "closed_disk", False):
        out[np.abs(w) >= 1.0 - BOUNDARY_EPS] = np.nan
    return complex(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class Image:
    """The function S f as an evaluable object."""

    S: OperatorSpec
    f: object

    @property
    def closed_disk(self):
        return getattr(self.f, "closed_disk", False)

    def __call__(self, z):
        return apply(self.S, self.f, z)


def target_norm(S, f, weight, grid=None, refine=True):
    """Weighted sup norm of S f; returns a :class:`~wdcop.spaces.SupEstimate`."""
    return weighted_sup_norm(Image(S, f), weight, grid, refine=refine)


def default_probes(space, n_ops, n_monomials=64, a_shells=9, a_angles=4):
    """Monomials z^0..z^64 and the automorphism-weighted kernels on an a-grid."""
    g = growth_exponent(space)
    probes = [(f"z^{m}", Power(m)) for m in range(n_monomials + 1)]
    anchors = [0j] + [(1 - 2.0 ** -j) * np.exp(2j * np.pi * t / a_angles)
                      for j in range(1, a_shells + 1) for t in range(a_angles)]
    for a in anchors:
        for k in range(n_ops + 1):
            probes.append((f"kernel(a={complex(a):.4g}, k={k})", ProbeKernel(complex(a), g, k)))
    return probes


class LowerBound(NamedTuple):
    value: float
    probe: str
    ratios: tuple


def operator_norm_lower_bound(S, space, weight, probes=None, grid=None, q=None):
    """max over probes of ||S f||_weight / ||f||_space."""
    if probes is None:
        probes = default_probes(space, S.n)
    probes = [p if isinstance(p, tuple) else (repr(p), p) for p in probes]
    best, arg, ratios = 0.0, "", []
    for label, f in probes:
        nf = norm(f, space, q, grid)
        if not nf >= 1e-12:
            raise DomainError(f"probe {label} has norm {nf:g} < 1e-12")
        r = target_norm(S, f, weight, grid).value / nf
        ratios.append(r)
        if r > best or math.isinf(r):
            best, arg = r, label
    return LowerBound(float(best), arg, tuple(ratios))
