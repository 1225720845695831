"""Scenario files, report emission and the lemma verification suite.

Scenario files are JSON::

    {"scenarios": [{
        "name": "identity-growth",
        "operator": {"symbols": [[[1, 0]]], "tau": {"builtin": "identity"}},
        "source_space": {"kind": "GROWTH", "alpha": 1},
        "target_weight": {"form": "POWER", "beta": 1},
        "order_bound_target": {"kind": "BOUNDARY", "q": 2},
        "expected": {"bounded": "YES", "compact": "NO"},
        "config": {"shells": 16}
    }]}

Complex numbers are ``[re, im]`` pairs.  A symbol or self-map is either a
coefficient list or a builtin: ``identity``, ``scaled_identity`` (``factor``),
``automorphism`` (``a``) or ``polynomial`` (``coeffs``).
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import criteria as cr
from .analytic import Mobius, Power, ProbeKernel, polynomial
from .errors import DomainError, ScenarioError, SelfMapViolation
from .operator import OperatorSpec, apply
from .spaces import (BERGMAN, GROWTH, HARDY, KINDS, POWER, SAMPLED, DiskGrid,
                     SpaceSpec, Weight, growth_bound_constant, growth_exponent,
                     monomial_norm_exponent, norm)

PARSE_ERROR = "PARSE_ERROR"
VALIDATION_ERROR = "VALIDATION_ERROR"
PROPERTIES = ("bounded", "compact", "order_bounded")
CONFIG_KEYS = ("shells", "angles", "a_shells", "a_angles", "n_max", "n_max_pointwise", "zero_tol")


# ---------------------------------------------------------------------------
# Function descriptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionDesc:
    """A serialisable description of a symbol or self-map."""

    builtin: str
    coeffs: tuple = ()
    param: complex = 0j

    def build(self):
        if self.builtin == "identity":
            return polynomial([0.0, 1.0])
        if self.builtin == "scaled_identity":
            return polynomial([0.0, self.param])
        if self.builtin == "automorphism":
            return Mobius(self.param)
        return polynomial(list(self.coeffs))

    def to_json(self):
        if self.builtin == "identity":
            return {"builtin": "identity"}
        if self.builtin == "scaled_identity":
            return {"builtin": "scaled_identity", "factor": _cjson(self.param)}
        if self.builtin == "automorphism":
            return {"builtin": "automorphism", "a": _cjson(self.param)}
        return [_cjson(c) for c in self.coeffs]


def _cjson(c):
    c = complex(c)
    return [c.real, c.imag]


class _Reader:
    """Typed field access that reports the JSON path of any bad value."""

    def __init__(self, where):
        self.where = where

    def fail(self, path, msg):
        raise ScenarioError(VALIDATION_ERROR, f"{self.where}{path}", msg)

    def obj(self, v, path):
        if not isinstance(v, dict):
            self.fail(path, "expected an object")
        return v

    def get(self, d, key, path, required=True):
        if key not in d:
            if required:
                self.fail(f"{path}.{key}", "missing field")
            return None
        return d[key]

    def real(self, v, path):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.fail(path, f"expected a finite number, got {v!r}")
        return float(v)

    def integer(self, v, path, lo=None):
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(path, f"expected an integer, got {v!r}")
        if lo is not None and v < lo:
            self.fail(path, f"must be >= {lo}, got {v}")
        return v

    def cplx(self, v, path):
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return complex(self.real(v, path))
        if not (isinstance(v, list) and len(v) == 2):
            self.fail(path, f"expected a complex number [re, im], got {v!r}")
        return complex(self.real(v[0], f"{path}[0]"), self.real(v[1], f"{path}[1]"))

    def function(self, v, path):
        if isinstance(v, list):
            if not v:
                self.fail(path, "coefficient list is empty")
            return FunctionDesc("polynomial", tuple(self.cplx(c, f"{path}[{i}]") for i, c in enumerate(v)))
        d = self.obj(v, path)
        name = self.get(d, "builtin", path)
        if name == "identity":
            return FunctionDesc("identity")
        if name == "scaled_identity":
            return FunctionDesc("scaled_identity", param=self.cplx(self.get(d, "factor", path), f"{path}.factor"))
        if name == "automorphism":
            a = self.cplx(self.get(d, "a", path), f"{path}.a")
            if abs(a) >= 1:
                self.fail(f"{path}.a", "automorphism parameter needs |a| < 1")
            return FunctionDesc("automorphism", param=a)
        if name == "polynomial":
            coeffs = self.get(d, "coeffs", path)
            if not isinstance(coeffs, list):
                self.fail(f"{path}.coeffs", "expected a list of coefficients")
            return self.function(coeffs, f"{path}.coeffs")
        self.fail(f"{path}.builtin", f"unknown builtin {name!r}")


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Scenario:
    name: str
    symbols: tuple
    tau: FunctionDesc
    source_space: SpaceSpec
    target_weight: Weight
    order_bound_target: Optional[cr.MeasureSpec] = None
    expected: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    operator: Optional[OperatorSpec] = field(default=None, repr=False)

    def build_operator(self):
        if self.operator is None:
            self.operator = OperatorSpec.build([s.build() for s in self.symbols], self.tau.build())
        return self.operator

    def criteria_config(self, base=None):
        base = base or cr.CriteriaConfig()
        return replace(base, **self.config)

    def to_json(self):
        d = {
            "name": self.name,
            "operator": {"symbols": [s.to_json() for s in self.symbols], "tau": self.tau.to_json()},
            "source_space": _space_json(self.source_space),
            "target_weight": self.target_weight.to_dict(),
        }
        if self.order_bound_target is not None:
            d["order_bound_target"] = self.order_bound_target.to_dict()
        if self.expected:
            d["expected"] = dict(self.expected)
        if self.config:
            d["config"] = dict(self.config)
        return d

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_json() == other.to_json()


def _space_json(X):
    d = {"kind": X.kind}
    if X.p is not None:
        d["p"] = X.p
    if X.alpha is not None:
        d["alpha"] = X.alpha
    return d


def _parse_space(rd, v, path):
    d = rd.obj(v, path)
    kind = rd.get(d, "kind", path)
    if kind not in KINDS:
        rd.fail(f"{path}.kind", f"unknown space kind {kind!r}; expected one of {', '.join(KINDS)}")
    p = rd.real(rd.get(d, "p", path), f"{path}.p") if kind in (BERGMAN, HARDY) else None
    alpha = rd.real(rd.get(d, "alpha", path), f"{path}.alpha") if kind in (GROWTH, BERGMAN) else None
    try:
        return SpaceSpec(kind, p, alpha)
    except DomainError as e:
        rd.fail(path, f"parameter range: {e}")


def _parse_weight(rd, v, path):
    d = rd.obj(v, path)
    form = rd.get(d, "form", path)
    try:
        if form == POWER:
            return Weight.power(rd.real(rd.get(d, "beta", path), f"{path}.beta"), d.get("label", ""))
        if form == SAMPLED:
            radii = rd.get(d, "radii", path)
            values = rd.get(d, "values", path)
            if not isinstance(radii, list) or not isinstance(values, list):
                rd.fail(path, "radii and values must be lists")
            return Weight.sampled([rd.real(x, f"{path}.radii[{i}]") for i, x in enumerate(radii)],
                                  [rd.real(x, f"{path}.values[{i}]") for i, x in enumerate(values)],
                                  d.get("label", ""))
    except DomainError as e:
        rd.fail(path, f"parameter range: {e}")
    rd.fail(f"{path}.form", f"unknown weight form {form!r}")


def _parse_measure(rd, v, path):
    d = rd.obj(v, path)
    kind = rd.get(d, "kind", path)
    q = rd.real(rd.get(d, "q", path), f"{path}.q")
    try:
        if kind == cr.BOUNDARY:
            return cr.MeasureSpec.boundary(q)
        if kind == cr.AREA:
            return cr.MeasureSpec.area(rd.real(rd.get(d, "beta", path), f"{path}.beta"), q)
    except DomainError as e:
        rd.fail(path, f"parameter range: {e}")
    rd.fail(f"{path}.kind", f"unknown measure kind {kind!r}")


def _parse_scenario(rd, v, path):
    d = rd.obj(v, path)
    name = rd.get(d, "name", path)
    if not isinstance(name, str) or not name:
        rd.fail(f"{path}.name", "expected a non-empty string")
    opd = rd.obj(rd.get(d, "operator", path), f"{path}.operator")
    syms = rd.get(opd, "symbols", f"{path}.operator")
    if not isinstance(syms, list) or not syms:
        rd.fail(f"{path}.operator.symbols", "expected a non-empty list of symbols")
    symbols = tuple(rd.function(s, f"{path}.operator.symbols[{i}]") for i, s in enumerate(syms))
    tau = rd.function(rd.get(opd, "tau", f"{path}.operator"), f"{path}.operator.tau")
    X = _parse_space(rd, rd.get(d, "source_space", path), f"{path}.source_space")
    nu = _parse_weight(rd, rd.get(d, "target_weight", path), f"{path}.target_weight")
    mu = None
    if d.get("order_bound_target") is not None:
        mu = _parse_measure(rd, d["order_bound_target"], f"{path}.order_bound_target")
    expected = {}
    if d.get("expected") is not None:
        ed = rd.obj(d["expected"], f"{path}.expected")
        for key, val in ed.items():
            if key not in PROPERTIES:
                rd.fail(f"{path}.expected.{key}", f"unknown property; expected one of {', '.join(PROPERTIES)}")
            if val not in ("YES", "NO"):
                rd.fail(f"{path}.expected.{key}", f"expected verdicts must be YES or NO, got {val!r}")
            expected[key] = val
    conf = {}
    if d.get("config") is not None:
        cd = rd.obj(d["config"], f"{path}.config")
        for key, val in cd.items():
            if key not in CONFIG_KEYS:
                rd.fail(f"{path}.config.{key}", "unknown config key")
            conf[key] = (rd.real(val, f"{path}.config.{key}") if key == "zero_tol"
                         else rd.integer(val, f"{path}.config.{key}", lo=1))
    sc = Scenario(name, symbols, tau, X, nu, mu, expected, conf)
    try:
        sc.build_operator()
    except SelfMapViolation as e:
        rd.fail(f"{path}.operator.tau", f"{SelfMapViolation.code}: {e}")
    except DomainError as e:
        rd.fail(f"{path}.operator", str(e))
    return sc


def parse_scenarios(text, source="<string>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(PARSE_ERROR, f"{source}:{e.lineno}:{e.colno}", e.msg) from None
    rd = _Reader(f"{source}:")
    if isinstance(doc, dict):
        items = rd.get(doc, "scenarios", "$")
        base = "$.scenarios"
    else:
        items, base = doc, "$"
    if not isinstance(items, list):
        rd.fail(base, "expected a list of scenarios")
    out = [_parse_scenario(rd, s, f"{base}[{i}]") for i, s in enumerate(items)]
    seen = set()
    for i, s in enumerate(out):
        if s.name in seen:
            rd.fail(f"{base}[{i}].name", f"duplicate scenario name {s.name!r}")
        seen.add(s.name)
    return out


def load_scenarios(path):
    """Read and validate a scenario file; raises :class:`ScenarioError`."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ScenarioError(PARSE_ERROR, str(path), e.strerror or str(e)) from None
    return parse_scenarios(text, str(path))


def dump_scenarios(scenarios):
    return json.dumps({"scenarios": [s.to_json() for s in scenarios]}, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class ScenarioResult:
    scenario: Scenario
    report: cr.CriterionReport
    comparison: dict

    @property
    def passed(self):
        return all(v == "PASS" for v in self.comparison.values())

    def to_dict(self):
        return {"name": self.scenario.name, "expected": dict(self.scenario.expected),
                "comparison": self.comparison, "status": "PASS" if self.passed else "MISMATCH",
                "report": self.report.to_dict()}


def run_report(scenario, config=None):
    """Evaluate every criterion for ``scenario`` and compare with its expectations."""
    S = scenario.build_operator()
    rep = cr.evaluate_criteria(S, scenario.source_space, scenario.target_weight,
                               scenario.order_bound_target, scenario.criteria_config(config))
    comparison = {key: ("PASS" if rep.verdicts.get(key) == want else "MISMATCH")
                  for key, want in sorted(scenario.expected.items())}
    return ScenarioResult(scenario, rep, comparison)


def run_all(scenarios, config=None):
    return [run_report(s, config) for s in scenarios]


def config_dict(config):
    return {k: getattr(config, k) for k in CONFIG_KEYS}


def to_json(results, config=None):
    doc = {"config": config_dict(config or cr.CriteriaConfig()),
           "scenarios": [r.to_dict() for r in results],
           "status": "PASS" if all(r.passed for r in results) else "MISMATCH"}
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


CSV_COLUMNS = ("scenario", "k", "M_k", "M_k_status", "G_k", "G_k_status", "Q_k", "Q_k_status",
               "testfn_sup", "testfn_sup_status", "testfn_limit", "testfn_limit_status",
               "bounded", "compact", "order_bounded", "status")


def _cell(e):
    return ("", "") if e is None else (repr(float(e.value)), e.status)


def to_csv(results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in results:
        v = r.report.verdicts
        for t in r.report.terms:
            w.writerow((r.scenario.name, t.k, *_cell(t.density_sup), *_cell(t.boundary_limit),
                        *_cell(t.majorant), *_cell(t.testfn_sup), *_cell(t.testfn_limit),
                        v["bounded"], v["compact"], v["order_bounded"] or "",
                        "PASS" if r.passed else "MISMATCH"))
    return buf.getvalue()


def audit_json(results):
    doc = {"scenarios": [{"name": r.scenario.name, "notes": list(r.report.notes),
                          "audit": [a.to_dict() for a in r.report.audit]} for r in results]}
    doc["failures"] = sum(a.status == "FAIL" for r in results for a in r.report.audit)
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# Lemma verification suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaConfig:
    nmax: int = 256
    shells: int = 12
    angles: int = 512
    unit_bound_tol: float = 1e-6
    stability_tol: float = 0.05


@dataclass
class LemmaItem:
    name: str
    status: str
    measured: object
    expected: object
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "status": self.status, "measured": self.measured,
                "expected": self.expected, "detail": self.detail}


SUITE_SPACES = (SpaceSpec.hardy(2), SpaceSpec.bergman(2, 0), SpaceSpec.hinf(), SpaceSpec.growth(1))

# (expected slope, tolerance) of log ||z^n|| against log n
_EXPONENTS = {"H^2": (0.0, 0.05), "A^2_0": (-0.5, 0.05), "H^inf": (0.0, 0.01), "A^-1": (-1.0, 0.1)}


def exponent_items(cfg):
    n_list = [n for n in (2 ** i for i in range(2, 20)) if n <= cfg.nmax]
    if len(n_list) < 2:
        raise DomainError("nmax must be at least 8")
    items = []
    for X in SUITE_SPACES:
        fit = monomial_norm_exponent(X, n_list)
        want, tol = _EXPONENTS[X.label]
        ok = abs(fit.slope - want) <= tol
        name = f"monomial norm exponent in {X.label}"
        if X.kind == GROWTH:
            # the decay rate of ||z^n|| here is n^-alpha; a growth rate n^+alpha
            # is the other reading of the sign, so both are reported
            cand = {"decay": -X.alpha, "growth": X.alpha}
            items.append(LemmaItem(name, "FLAG" if ok else "FAIL", fit.slope,
                                   {"candidates": cand, "tolerance": tol},
                                   "measured slope matches the decaying candidate n^-alpha, "
                                   "not the growing one" if ok else "slope matches neither candidate"))
        else:
            items.append(LemmaItem(name, "PASS" if ok else "FAIL", fit.slope,
                                   {"slope": want, "tolerance": tol}))
    return items


def _growth_probes(X):
    g = growth_exponent(X)
    probes = [Power(n) for n in (0, 1, 2, 4, 8, 16, 32)]
    for r in (0.0, 0.5, 0.9, 0.99):
        for t in range(4):
            a = r * complex(math.cos(t * math.pi / 2), math.sin(t * math.pi / 2))
            probes.append(ProbeKernel(a, g, 0))
            if r == 0:
                break
    return probes


def _growth_items(cfg):
    items = []
    grid = DiskGrid(cfg.shells, cfg.angles)
    for X in SUITE_SPACES:
        probes = _growth_probes(X)
        for k in range(3):
            c1 = growth_bound_constant(X, k, probes, grid)
            c2 = growth_bound_constant(X, k, probes, grid.refined())
            rel = abs(c2.value - c1.value) / max(c1.value, 1e-300)
            ok = math.isfinite(c1.value) and c1.status != cr.DIVERGENT and rel < cfg.stability_tol
            items.append(LemmaItem(f"pointwise growth constant in {X.label}, derivative order {k}",
                                   "PASS" if ok else "FAIL", c2.value,
                                   {"finite": True, "refinement_change_below": cfg.stability_tol},
                                   f"coarse {c1.value:.6g} ({c1.status}), refined {c2.value:.6g} "
                                   f"({c2.status}), relative change {rel:.2e}"))
    return items


def unit_bound_anchors():
    """Twelve anchors with |a| <= 0.95."""
    out = [0j]
    for r, n in ((0.5, 3), (0.8, 4), (0.95, 4)):
        out += [r * complex(math.cos(2 * math.pi * t / n + r), math.sin(2 * math.pi * t / n + r))
                for t in range(n)]
    return out


UNIT_BOUND_SPACES = (SpaceSpec.hinf(), SpaceSpec.growth(1), SpaceSpec.bergman(2, 1),
                     SpaceSpec.hardy(2))


def _unit_bound_items(cfg):
    items = []
    grid = DiskGrid(cfg.shells, cfg.angles)
    for X in UNIT_BOUND_SPACES:
        g = growth_exponent(X)
        for k in range(4):
            norms = [norm(ProbeKernel(a, g, k), X, grid=grid) for a in unit_bound_anchors()]
            worst = max(norms)
            ok = worst <= 1.0 + cfg.unit_bound_tol
            items.append(LemmaItem(f"normalized probe unit bound in {X.label}, automorphism power {k}",
                                   "PASS" if ok else "FAIL", worst,
                                   {"at_most": 1.0 + cfg.unit_bound_tol},
                                   f"{len(norms)} anchors with |a| <= 0.95"))
    return items


def verify_lemmas(config=None):
    """Monomial exponents, growth constants and the probe unit-bound sweep."""
    cfg = config or LemmaConfig()
    return exponent_items(cfg) + _growth_items(cfg) + _unit_bound_items(cfg)


def lemmas_json(items, cfg=None):
    cfg = cfg or LemmaConfig()
    doc = {"config": {"nmax": cfg.nmax, "shells": cfg.shells, "angles": cfg.angles},
           "items": [i.to_dict() for i in items],
           "status": "FAIL" if any(i.status == "FAIL" for i in items) else "PASS"}
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def lemmas_csv(items):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("name", "status", "measured", "detail"))
    for i in items:
        m = json.dumps(i.measured, sort_keys=True) if not isinstance(i.measured, float) else repr(i.measured)
        w.writerow((i.name, i.status, m, i.detail))
    return buf.getvalue()


def probe_value(scenario, f, z):
    """(S f)(z) for a single point."""
    return apply(scenario.build_operator(), f, complex(z))


__all__ = [
    "Scenario", "FunctionDesc", "load_scenarios", "parse_scenarios", "dump_scenarios",
    "run_report", "run_all", "to_json", "to_csv", "audit_json", "verify_lemmas",
    "LemmaConfig", "LemmaItem", "exponent_items", "lemmas_json", "lemmas_csv", "probe_value",
]
