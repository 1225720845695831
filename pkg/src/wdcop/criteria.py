"""Criteria for boundedness, compactness and order boundedness.

Every criterion is a supremum or a limit of a density built from the symbols
u_k and the self-map tau,

    density_k(z) = nu(z) |u_k(z)| / (1 - |tau(z)|^2)^(k + gamma),

or a norm of the operator applied to a probe family.  None of these can be
decided from finitely many samples, so each one is sampled on a geometric
ladder (shells r_j = 1 - 2^-j, anchors |a| = 1 - 2^-j, degrees n = 2^j) and
the ladder is classified by :func:`wdcop._ladder.classify`.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import roots_legendre

from . import _ladder
from .analytic import Power, ProbeKernel, anchored_probe_derivatives
from .errors import DomainError, WrongSpace
from .operator import _is_zero, target_norm
from .spaces import GROWTH, HINF, DiskGrid, Weight, compass_refine, growth_exponent

YES, NO, INCONCLUSIVE = "YES", "NO", "INCONCLUSIVE"
FINITE, DIVERGENT, DECAYING = _ladder.FINITE, _ladder.DIVERGENT, _ladder.DECAYING
SUP, LIMIT = "SUP", "LIMIT"

BOUNDARY = "BOUNDARY"
AREA = "AREA"


@dataclass(frozen=True)
class MeasureSpec:
    """Target measure for order boundedness: arclength on the circle or dA_beta."""

    kind: str
    q: float
    beta: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (BOUNDARY, AREA):
            raise DomainError(f"unknown measure kind {self.kind!r}")
        if not (self.q > 0 and math.isfinite(self.q)):
            raise DomainError(f"q must be > 0, got {self.q!r}")
        if self.kind == AREA and (self.beta is None or not self.beta > -1):
            raise DomainError(f"AREA measure needs beta > -1, got {self.beta!r}")

    @classmethod
    def boundary(cls, q):
        return cls(BOUNDARY, float(q))

    @classmethod
    def area(cls, beta, q):
        return cls(AREA, float(q), float(beta))

    def to_dict(self):
        d = {"kind": self.kind, "q": self.q}
        if self.kind == AREA:
            d["beta"] = self.beta
        return d


@dataclass(frozen=True)
class CriteriaConfig:
    shells: int = 16
    angles: int = 1024
    a_shells: int = 9
    a_angles: int = 8
    n_max: int = 2048
    n_max_pointwise: int = 256
    zero_tol: float = 1e-6

    def grid(self, include_boundary=True):
        return DiskGrid(self.shells, self.angles, include_boundary=include_boundary)


@dataclass(frozen=True)
class Estimate:
    """A classified ladder: ``value`` is the sup/limit/norm (inf if divergent)."""

    value: float
    status: str
    trace: tuple = ()
    note: str = ""

    def to_dict(self):
        return {"value": _num(self.value), "status": self.status,
                "trace": [_num(v) for v in self.trace], "note": self.note}


def _num(v):
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------

def criterion_density(S, space, weight, k, z):
    """nu(z)|u_k(z)| / (1-|tau(z)|^2)^(k+gamma); ``weight=None`` means nu = 1.

    Returns +inf where |tau(z)| >= 1 numerically and u_k(z) != 0.
    """
    z = np.asarray(z, dtype=np.complex128)
    g = growth_exponent(space)
    u = S.symbols[k]
    if _is_zero(u):
        return np.zeros(z.shape) if z.ndim else 0.0
    nu = 1.0 if weight is None else weight(z)
    num = nu * np.abs(u(z))
    gap = 1.0 - np.abs(S.tau(z)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(gap > 0, num / np.where(gap > 0, gap, 1.0) ** (k + g), np.inf)
    out = np.where(num == 0, 0.0, out)
    return out if z.ndim else float(out)


def _density(S, space, weight, k, z):
    if k is None:
        return sum(criterion_density(S, space, weight, i, z) for i in range(S.n + 1))
    return criterion_density(S, space, weight, k, z)


def _shells(grid):
    return [np.zeros(1, dtype=np.complex128)] + [grid.shell(j) for j in range(1, grid.shells + 1)]


def boundedness_sup(S, space, weight, k, config=None):
    """sup_z of the density for index k (k=None: the summed density).

    The trace is the running sup over the origin and shells 1..J.
    """
    config = config or CriteriaConfig()
    grid = config.grid(include_boundary=False)
    per = []
    arg = 0j
    best = -1.0
    for pts in _shells(grid):
        d = _density(S, space, weight, k, pts)
        i = int(np.argmax(d))
        per.append(float(d[i]))
        if d[i] > best:
            best, arg = float(d[i]), complex(pts[i])
    running = np.maximum.accumulate(per)
    trend = _ladder.classify(running)
    if trend.status == DIVERGENT:
        return Estimate(math.inf, DIVERGENT, tuple(running))
    value = float(running[-1])
    if trend.status == FINITE and value > 0:
        value, _ = compass_refine(lambda z: _density(S, space, weight, k, z), arg, value, grid)
    return Estimate(float(value), trend.status, tuple(running))


def compactness_limit(S, space, weight, k, config=None, bounded=None):
    """lim of the density as |tau(z)| -> 1, from sups over {|tau| > 1 - 2^-j}.

    A strict self-map makes the constraint set empty near the boundary and the
    limit is 0 by definition.  Divergence mirrors ``bounded`` when given.
    """
    config = config or CriteriaConfig()
    if S.strict:
        return Estimate(0.0, FINITE, (), "self-map bounded away from the circle")
    if bounded is not None and bounded.status == DIVERGENT:
        return Estimate(math.inf, DIVERGENT, (), "density supremum diverges")
    grid = config.grid(include_boundary=False)
    pts = np.concatenate(_shells(grid))
    mod = np.abs(S.tau(pts))
    dens = _density(S, space, weight, k, pts)
    trace = []
    for j in range(1, grid.shells):
        mask = mod > 1.0 - 2.0 ** -j
        if not mask.any():
            break
        trace.append(float(np.max(dens[mask])))
    trend = _ladder.classify(trace)
    return Estimate(trend.limit, trend.status, tuple(trace))


# ---------------------------------------------------------------------------
# Probe-family conditions
# ---------------------------------------------------------------------------

def _anchors(config):
    shells = [np.zeros(1, dtype=np.complex128)]
    for j in range(1, config.a_shells + 1):
        r = 1.0 - 2.0 ** -j
        shells.append(r * np.exp(2j * np.pi * (np.arange(config.a_angles) + 0.5 * (j % 2))
                                 / config.a_angles))
    return shells


def is_degenerate_probe(space, k):
    """True when the probe is the constant 1 for every anchor (gamma = 0, k = 0)."""
    return growth_exponent(space) == 0 and k == 0


def testfn_ladder(S, space, weight, k, config=None):
    """Per-anchor-shell maxima of ||S(kernel_a * automorphism_a^k)||_weight."""
    config = config or CriteriaConfig()
    g = growth_exponent(space)
    base = config.grid()
    per = []
    for anchors in _anchors(config):
        best = 0.0
        for a in anchors:
            a = complex(a)
            est = target_norm(S, ProbeKernel(a, g, k), weight, base.with_points([a]))
            best = max(best, est.value)
        per.append(best)
    return per


def testfn_condition(S, space, weight, k, mode=SUP, config=None, ladder=None):
    """SUP: sup over anchors |a| <= 1 - 2^-a_shells; LIMIT: trend as |a| -> 1."""
    per = ladder if ladder is not None else testfn_ladder(S, space, weight, k, config)
    if mode == SUP:
        running = np.maximum.accumulate(per)
        trend = _ladder.classify(running)
        value = math.inf if trend.status == DIVERGENT else float(running[-1])
        return Estimate(value, trend.status, tuple(running))
    if mode != LIMIT:
        raise ValueError(f"mode must be SUP or LIMIT, got {mode!r}")
    trend = _ladder.classify(per[1:])
    note = "probe is constant for every anchor" if is_degenerate_probe(space, k) else ""
    return Estimate(trend.limit, trend.status, tuple(per[1:]), note)


def _require_sup_space(space):
    if space.kind not in (HINF, GROWTH):
        raise WrongSpace(f"monomial conditions apply to H^inf and A^-alpha only, not {space.label}")


class _GridCache:
    """Symbols, self-map and weight evaluated once on a fixed point set."""

    def __init__(self, S, weight, pts):
        self.pts = pts
        self.w = S.tau(pts)
        self.u = [None if _is_zero(u) else np.asarray(u(pts)) for u in S.symbols]
        self.nu = np.ones(pts.shape) if weight is None else weight(pts)

    def image_monomial(self, n):
        out = np.zeros(self.pts.shape, dtype=np.complex128)
        for k, u in enumerate(self.u):
            if u is None or k > n:
                continue
            fall = float(np.prod(np.arange(n - k + 1, n + 1, dtype=np.float64)))
            out += u * fall * np.power(self.w, n - k)
        return out


def monomial_ladder(S, space, weight, config=None):
    """n^gamma ||S z^n||_weight for n = 1..n_max.

    Returns (dense grid-only values, refined values on n = 2^i).
    """
    _require_sup_space(space)
    config = config or CriteriaConfig()
    g = growth_exponent(space)
    grid = config.grid()
    cache = _GridCache(S, weight, grid.points())
    dense = np.empty(config.n_max)
    for n in range(1, config.n_max + 1):
        dense[n - 1] = n ** g * np.max(cache.nu * np.abs(cache.image_monomial(n)))
    ladder_n = [2 ** i for i in range(int(math.log2(config.n_max)) + 1)]
    refined = {n: n ** g * target_norm(S, Power(n), weight, grid).value for n in ladder_n}
    for n in np.argsort(dense)[-3:] + 1:
        n = int(n)
        if n not in refined:
            refined[n] = n ** g * target_norm(S, Power(n), weight, grid).value
    return dense, refined


def monomial_condition(S, space, weight, mode=SUP, config=None, ladder=None):
    """SUP: sup_n n^gamma ||S z^n||; LIMIT: its trend as n -> infinity."""
    _require_sup_space(space)
    dense, refined = ladder if ladder is not None else monomial_ladder(S, space, weight, config)
    for n, v in refined.items():
        dense[n - 1] = max(dense[n - 1], v)
    ladder_n = sorted(n for n in refined if n & (n - 1) == 0)
    if mode == SUP:
        running = [float(np.max(dense[:n])) for n in ladder_n]
        trend = _ladder.classify(running)
        value = math.inf if trend.status == DIVERGENT else float(np.max(dense))
        return Estimate(value, trend.status, tuple(running))
    if mode != LIMIT:
        raise ValueError(f"mode must be SUP or LIMIT, got {mode!r}")
    seq = [refined[n] for n in ladder_n]
    trend = _ladder.classify(seq)
    return Estimate(trend.limit, trend.status, tuple(seq))


# ---------------------------------------------------------------------------
# Order boundedness
# ---------------------------------------------------------------------------

def _area_rule(t0, t1, beta, n=24):
    x, w = roots_legendre(n)
    t = 0.5 * (t1 - t0) * (x + 1.0) + t0
    return t, 0.5 * (t1 - t0) * w * (beta + 1.0) * (1.0 - t) ** beta


def _lq_ladder(fn, measure, config):
    """Partial integrals of fn^q against the measure along the shell ladder.

    BOUNDARY: circle means at r_j.  AREA: integral over |z| < r_j.
    """
    n_ang = config.angles
    ring = np.exp(2j * np.pi * np.arange(n_ang) / n_ang)
    radii = 1.0 - 2.0 ** -np.arange(1, config.shells + 1, dtype=float)
    q = measure.q
    seq = []
    if measure.kind == BOUNDARY:
        for r in radii:
            seq.append(float(np.mean(fn(r * ring) ** q)))
        return seq
    total, t_prev = 0.0, 0.0
    for r in radii:
        t, w = _area_rule(t_prev, r * r, measure.beta)
        vals = fn((np.sqrt(t)[:, None] * ring[None, :]).ravel()).reshape(t.size, n_ang)
        total += float(np.dot(w, np.mean(vals ** q, axis=1)))
        seq.append(total)
        t_prev = r * r
    return seq


def _lq_estimate(seq, q, note=""):
    trend = _ladder.classify(seq)
    if trend.status == DIVERGENT:
        return Estimate(math.inf, DIVERGENT, tuple(seq), note)
    status = FINITE if trend.status == DECAYING else trend.status
    return Estimate(float(trend.limit) ** (1.0 / q), status, tuple(seq), note)


def order_bounded_majorant(S, space, measure, k, config=None):
    """L^q(measure) norm of z -> |u_k(z)| / (1-|tau(z)|^2)^(k+gamma).

    ``k=None`` uses the sum over k.  The density is read pointwise in z.
    """
    config = config or CriteriaConfig()
    seq = _lq_ladder(lambda z: _density(S, space, None, k, z), measure, config)
    return _lq_estimate(seq, measure.q)


def testfn_majorant(S, space, measure, k, config=None):
    """L^q norm of z -> |S(g)(z)| with g the probe anchored at tau(z).

    The supremum over all anchors is bounded below by this choice of anchor.
    """
    config = config or CriteriaConfig()
    g = growth_exponent(space)

    def fn(z):
        w = S.tau(z)
        out = np.zeros(z.shape, dtype=np.complex128)
        mask = np.abs(w) < 1.0
        d = anchored_probe_derivatives(w[mask], g, k, S.n)
        for i, u in enumerate(S.symbols):
            if not _is_zero(u):
                out[mask] += u(z[mask]) * d[i]
        res = np.abs(out)
        res[~mask] = np.inf
        return res

    seq = _lq_ladder(fn, measure, config)
    return _lq_estimate(seq, measure.q)


def monomial_majorant(S, space, measure, config=None):
    """L^q norm of z -> sup_n n^gamma |S z^n (z)| for n <= n_max_pointwise."""
    _require_sup_space(space)
    config = config or CriteriaConfig()
    g = growth_exponent(space)

    def fn(z):
        cache = _GridCache(S, None, z)
        best = np.zeros(z.shape)
        for n in range(1, config.n_max_pointwise + 1):
            best = np.maximum(best, n ** g * np.abs(cache.image_monomial(n)))
        return best

    seq = _lq_ladder(fn, measure, config)
    return _lq_estimate(seq, measure.q)


# ---------------------------------------------------------------------------
# Verdicts and the equivalence audit
# ---------------------------------------------------------------------------

def finite_verdict(estimates):
    st = [e.status for e in estimates]
    if any(s == DIVERGENT for s in st):
        return NO
    if all(s in (FINITE, DECAYING) for s in st):
        return YES
    return INCONCLUSIVE


def zero_verdict(estimates, scale=1.0, tol=1e-6):
    """YES if every limit is 0, NO if any is clearly positive or divergent."""
    out = YES
    for e in estimates:
        if e.status == DIVERGENT:
            return NO
        if e.status == DECAYING or (e.status == FINITE and e.value <= tol * max(1.0, scale)):
            continue
        if e.status == FINITE:
            return NO
        out = INCONCLUSIVE
    return out


@dataclass
class KTerms:
    k: int
    density_sup: Estimate
    boundary_limit: Estimate
    testfn_sup: Estimate
    testfn_limit: Estimate
    majorant: Optional[Estimate] = None
    testfn_majorant: Optional[Estimate] = None

    def to_dict(self):
        d = {"k": self.k}
        for name in ("density_sup", "boundary_limit", "testfn_sup", "testfn_limit",
                     "majorant", "testfn_majorant"):
            e = getattr(self, name)
            d[name] = None if e is None else e.to_dict()
        return d


@dataclass
class AuditItem:
    prop: str
    first: str
    second: str
    verdicts: tuple
    status: str
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {"property": self.prop, "pair": [self.first, self.second],
                "verdicts": list(self.verdicts), "status": self.status,
                "evidence": self.evidence}


@dataclass
class CriterionReport:
    space: str
    weight: str
    measure: Optional[dict]
    growth_exponent: float
    tau_sup: float
    strict_self_map: bool
    terms: list
    sum_density_sup: Estimate
    sum_boundary_limit: Estimate
    sum_majorant: Optional[Estimate]
    monomial_sup: Optional[Estimate]
    monomial_limit: Optional[Estimate]
    monomial_majorant: Optional[Estimate]
    conditions: dict
    verdicts: dict
    notes: list = field(default_factory=list)
    audit: list = field(default_factory=list)

    def to_dict(self):
        def opt(e):
            return None if e is None else e.to_dict()
        return {
            "space": self.space, "weight": self.weight, "measure": self.measure,
            "growth_exponent": self.growth_exponent, "tau_sup": _num(self.tau_sup),
            "strict_self_map": self.strict_self_map,
            "terms": [t.to_dict() for t in self.terms],
            "sum_density_sup": opt(self.sum_density_sup),
            "sum_boundary_limit": opt(self.sum_boundary_limit),
            "sum_majorant": opt(self.sum_majorant),
            "monomial_sup": opt(self.monomial_sup),
            "monomial_limit": opt(self.monomial_limit),
            "monomial_majorant": opt(self.monomial_majorant),
            "conditions": self.conditions, "verdicts": self.verdicts,
            "notes": list(self.notes), "audit": [a.to_dict() for a in self.audit],
        }


def evaluate_criteria(S, space, weight, measure=None, config=None):
    """Compute every criterion for the operator and assemble the report."""
    config = config or CriteriaConfig()
    sup_space = space.kind in (HINF, GROWTH)
    notes = []
    terms = []
    for k in range(S.n + 1):
        dens = boundedness_sup(S, space, weight, k, config)
        lim = compactness_limit(S, space, weight, k, config, bounded=dens)
        tl = testfn_ladder(S, space, weight, k, config)
        t = KTerms(k, dens, lim, testfn_condition(S, space, weight, k, SUP, config, tl),
                   testfn_condition(S, space, weight, k, LIMIT, config, tl))
        if measure is not None:
            t.majorant = order_bounded_majorant(S, space, measure, k, config)
            t.testfn_majorant = testfn_majorant(S, space, measure, k, config)
        terms.append(t)
    sum_dens = boundedness_sup(S, space, weight, None, config)
    sum_lim = compactness_limit(S, space, weight, None, config, bounded=sum_dens)
    sum_maj = order_bounded_majorant(S, space, measure, None, config) if measure else None
    mono_sup = mono_lim = mono_maj = None
    if sup_space:
        ml = monomial_ladder(S, space, weight, config)
        mono_sup = monomial_condition(S, space, weight, SUP, config, ml)
        mono_lim = monomial_condition(S, space, weight, LIMIT, config, ml)
        if measure is not None:
            mono_maj = monomial_majorant(S, space, measure, config)

    scale = max([1.0] + [t.density_sup.value for t in terms if math.isfinite(t.density_sup.value)])
    tol = config.zero_tol
    cond = {"bounded": {}, "compact": {}, "order_bounded": {}}
    cond["bounded"]["sum_density_sup"] = finite_verdict([sum_dens])
    cond["bounded"]["density_sup"] = finite_verdict([t.density_sup for t in terms])
    cond["bounded"]["test_function_sup"] = finite_verdict([t.testfn_sup for t in terms])
    if sup_space:
        cond["bounded"]["monomial_sup"] = finite_verdict([mono_sup])

    cond["compact"]["sum_boundary_limit"] = zero_verdict([sum_lim], scale, tol)
    cond["compact"]["boundary_limit"] = zero_verdict([t.boundary_limit for t in terms], scale, tol)
    usable = [t.testfn_limit for t in terms if not is_degenerate_probe(space, t.k)]
    if any(is_degenerate_probe(space, t.k) for t in terms):
        notes.append("test_function_limit: the k=0 probe is the constant 1 when the growth "
                     "exponent is 0, so it is excluded from the compactness cross-check")
    if usable:
        cond["compact"]["test_function_limit"] = zero_verdict(usable, scale, tol)
    if sup_space:
        cond["compact"]["monomial_limit"] = zero_verdict([mono_lim], scale, tol)

    if measure is not None:
        cond["order_bounded"]["sum_majorant"] = finite_verdict([sum_maj])
        cond["order_bounded"]["majorant"] = finite_verdict([t.majorant for t in terms])
        cond["order_bounded"]["test_function_majorant"] = finite_verdict(
            [t.testfn_majorant for t in terms])
        if sup_space:
            cond["order_bounded"]["monomial_majorant"] = finite_verdict([mono_maj])

    bounded = cond["bounded"]["density_sup"]
    compact = cond["compact"]["boundary_limit"]
    if bounded == NO:
        compact = NO
    elif bounded == INCONCLUSIVE and compact == YES:
        compact = INCONCLUSIVE
    verdicts = {"bounded": bounded, "compact": compact,
                "order_bounded": cond["order_bounded"].get("majorant")}

    report = CriterionReport(
        space.label, weight.label, None if measure is None else measure.to_dict(),
        growth_exponent(space), S.tau_sup, S.strict, terms, sum_dens, sum_lim, sum_maj,
        mono_sup, mono_lim, mono_maj, cond, verdicts, notes)
    report.audit = equivalence_audit(report)
    return report


_PRIMARY = {"bounded": "density_sup", "compact": "boundary_limit", "order_bounded": "majorant"}


def equivalence_audit(report):
    """Compare the verdicts of every available condition pairwise.

    PASS: both definite and equal.  FAIL: both definite and different.
    INCONCLUSIVE: at least one side undecided.
    """
    items = []
    for prop, conds in report.conditions.items():
        names = list(conds)
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                a, b = names[i], names[j]
                va, vb = conds[a], conds[b]
                if INCONCLUSIVE in (va, vb):
                    status = INCONCLUSIVE
                else:
                    status = "PASS" if va == vb else "FAIL"
                items.append(AuditItem(prop, a, b, (va, vb), status,
                                       {a: _evidence(report, prop, a), b: _evidence(report, prop, b)}))
    return items


def _evidence(report, prop, cond):
    def vals(attr):
        return [_num(getattr(t, attr).value) for t in report.terms]
    table = {
        ("bounded", "sum_density_sup"): lambda: _num(report.sum_density_sup.value),
        ("bounded", "density_sup"): lambda: vals("density_sup"),
        ("bounded", "test_function_sup"): lambda: vals("testfn_sup"),
        ("bounded", "monomial_sup"): lambda: _num(report.monomial_sup.value),
        ("compact", "sum_boundary_limit"): lambda: _num(report.sum_boundary_limit.value),
        ("compact", "boundary_limit"): lambda: vals("boundary_limit"),
        ("compact", "test_function_limit"): lambda: vals("testfn_limit"),
        ("compact", "monomial_limit"): lambda: _num(report.monomial_limit.value),
        ("order_bounded", "sum_majorant"): lambda: _num(report.sum_majorant.value),
        ("order_bounded", "majorant"): lambda: vals("majorant"),
        ("order_bounded", "test_function_majorant"): lambda: vals("testfn_majorant"),
        ("order_bounded", "monomial_majorant"): lambda: _num(report.monomial_majorant.value),
    }
    return table[(prop, cond)]()
