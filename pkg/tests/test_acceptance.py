"""Exit criteria of the package, one test per criterion.

Each test appends a PASS/FAIL line to the acceptance section of the pytest
terminal summary (also printed inline, visible with ``-s``).
"""
import math
import subprocess
import sys
import time
from contextlib import contextmanager

import mpmath as mp
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from wdcop import analytic as an
from wdcop import spaces as sp

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(label):
    t0 = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException:
        line = f"FAIL  {label}  ({time.perf_counter() - t0:.1f} s) {detail.get('msg', '')}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"PASS  {label}  ({time.perf_counter() - t0:.1f} s) {detail.get('msg', '')}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_growth_exponent_table():
    with criterion("growth exponent table") as d:
        table = [(sp.SpaceSpec.hinf(), 0.0), (sp.SpaceSpec.growth(2), 2.0), (sp.SpaceSpec.bergman(2, 0), 1.0),
                 (sp.SpaceSpec.bergman(4, 1), 0.75), (sp.SpaceSpec.hardy(2), 0.5), (sp.SpaceSpec.hardy(4), 0.25)]
        got = [sp.growth_exponent(X) for X, _ in table]
        d["msg"] = f"{got}"
        assert got == [v for _, v in table]


def _probe_series_norm(a, gamma, alpha=None):
    """Norm of the normalized probe from its Taylor coefficients, by direct summation.

    Hardy-2 when alpha is None (Parseval), otherwise the weighted Bergman-2 norm.
    """
    a = mp.mpc(a)
    scale = (1 - abs(a) ** 2) ** gamma

    def term(l):
        c2 = (scale * mp.rf(2 * gamma, l) / mp.factorial(l)) ** 2 * abs(a) ** (2 * l)
        if alpha is None:
            return c2
        return c2 * mp.factorial(l) * mp.gamma(alpha + 2) / mp.gamma(l + alpha + 2)
    return float(mp.sqrt(mp.nsum(term, [0, mp.inf])))


def test_exact_norm_oracles():
    with criterion("exact norm oracles, under 10 s") as d:
        mp.mp.dps = 30
        anchors = [0.0, 0.5, 0.9 * np.exp(1j * np.pi / 4)]
        oracles = {a: (_probe_series_norm(a, 0.5), _probe_series_norm(a, 1.5, 1.0)) for a in anchors}
        t0 = time.perf_counter()
        err = 0.0
        for n in range(65):
            f = an.monomial(n)
            for p in (1, 2, 4):
                err = max(err, abs(sp.hardy_norm(f, p) - 1.0))
            err = max(err, abs(sp.bergman_norm(f, 2, 0) - (n + 1) ** -0.5))
        assert err <= 1e-8
        perr = 0.0
        for a, (h2, a21) in oracles.items():
            assert abs(h2 - 1) < 1e-12 and abs(a21 - 1) < 1e-12
            perr = max(perr, abs(sp.hardy_norm(an.test_function(a, 0.5), 2) - h2))
            perr = max(perr, abs(sp.bergman_norm(an.test_function(a, 1.5), 2, 1.0) - a21))
        assert perr <= 1e-6
        worst = 0.0
        for alpha in (0.5, 1.0, 3.0):
            for a in anchors + [0.99 * np.exp(2j)]:
                worst = max(worst, sp.weighted_sup_norm(an.ProbeKernel(a, alpha), sp.Weight.power(alpha)).value)
        assert worst <= 1 + 1e-8
        elapsed = time.perf_counter() - t0
        d["msg"] = f"monomial err {err:.1e}, probe err {perr:.1e}, growth sup {worst:.12f}, {elapsed:.1f} s"
        assert elapsed < 10


def test_monomial_exponents(lemma_items):
    from wdcop import harness
    with criterion("monomial norm exponents with sign flag, under 20 s") as d:
        t0 = time.perf_counter()
        items = harness.exponent_items(harness.LemmaConfig())
        elapsed = time.perf_counter() - t0
        by = {i.name.rsplit(" ", 1)[1]: i for i in items}
        d["msg"] = ", ".join(f"{k} {i.measured:+.3f} {i.status}" for k, i in by.items()) + f", {elapsed:.1f} s"
        assert abs(by["H^2"].measured) <= 0.05 and by["H^2"].status == "PASS"
        assert abs(by["A^2_0"].measured + 0.5) <= 0.05 and by["A^2_0"].status == "PASS"
        assert abs(by["H^inf"].measured) <= 0.01 and by["H^inf"].status == "PASS"
        assert abs(by["A^-1"].measured + 1.0) <= 0.1 and by["A^-1"].status == "FLAG"
        assert set(by["A^-1"].expected["candidates"].values()) == {-1.0, 1.0}
        assert [i.to_dict() for i in items] == [i.to_dict() for i in lemma_items if "exponent" in i.name]
        assert elapsed < 20


def test_probe_unit_bound_sweep(lemma_items):
    from wdcop import harness
    with criterion("normalized probe unit bound sweep") as d:
        items = [i for i in lemma_items if "unit bound" in i.name]
        kinds = {X.kind for X in harness.UNIT_BOUND_SPACES}
        worst = max(i.measured for i in items)
        d["msg"] = f"{len(items)} (space, k) cells over {len(harness.unit_bound_anchors())} anchors, max {worst:.9f}"
        assert kinds == {"HINF", "GROWTH", "BERGMAN", "HARDY"} and len(items) == 16
        assert len(harness.unit_bound_anchors()) == 12
        assert max(abs(a) for a in harness.unit_bound_anchors()) <= 0.95 + 1e-15
        assert worst <= 1 + 1e-6


def test_probe_derivative_data():
    with criterion("probe derivative data") as d:
        w_grid = [0, 0.3, 0.6 * np.exp(1j * np.pi / 3), 0.9]
        low, rel = 0.0, 0.0
        for w in w_grid:
            for gamma in (0.0, 0.5, 1.0, 2.0):
                for k in range(5):
                    der = an.derivatives_at(an.proof_probe(w, gamma, k), w, k)
                    scale = math.factorial(k) / (1 - abs(w) ** 2) ** (k + gamma)
                    if k:
                        low = max(low, np.max(np.abs(der[:k])) / scale)
                    rel = max(rel, abs(abs(der[k]) - scale) / scale)
        d["msg"] = f"lower derivatives / scale {low:.1e}, top derivative rel err {rel:.1e}"
        assert low < 1e-8 and rel <= 1e-6


def test_scenario_fixtures(fixture_run, results_by_name):
    with criterion("scenario fixture verdicts, under 60 s") as d:
        _, results, elapsed = fixture_run
        d["msg"] = f"{sum(r.passed for r in results)}/{len(results)} pass, {elapsed:.1f} s"
        for r in results:
            assert r.passed, (r.scenario.name, r.report.verdicts)
        r = results_by_name["identity-hinf-into-weight-1"].report.verdicts
        assert (r["bounded"], r["compact"]) == ("YES", "YES")
        rep = results_by_name["identity-growth-1-into-weight-1"].report
        assert (rep.verdicts["bounded"], rep.verdicts["compact"]) == ("YES", "NO")
        assert abs(rep.terms[0].boundary_limit.value - 1.0) <= 0.02
        assert results_by_name["first-derivative-hinf-into-weight-half"].report.verdicts["bounded"] == "NO"
        rep = results_by_name["strict-self-map-bergman-into-unit-weight"].report
        assert rep.verdicts["compact"] == "YES"
        assert all(t.boundary_limit.value == 0.0 for t in rep.terms)
        assert results_by_name["half-composition-hardy-order-bounded"].report.verdicts["order_bounded"] == "YES"
        assert results_by_name["identity-composition-hardy-not-order-bounded"].report.verdicts["order_bounded"] == "NO"
        assert elapsed < 60


def test_equivalence_audit(fixture_run):
    with criterion("equivalence audit") as d:
        results = fixture_run[1]
        items = [(r, a) for r in results for a in r.report.audit]
        fails = [(r.scenario.name, a.first, a.second) for r, a in items if a.status == "FAIL"]
        excluded = [r.scenario.name for r in results
                    if any("excluded from the compactness cross-check" in n for n in r.report.notes)]
        d["msg"] = f"{len(items)} pairs, {len(fails)} FAIL, probe exclusion noted for {len(excluded)} scenarios"
        assert fails == []
        for r in results:
            pairs = {(a.prop, a.first, a.second): a.status for a in r.report.audit}
            for first, second in [("sum_density_sup", "density_sup"), ("sum_density_sup", "test_function_sup"),
                                  ("density_sup", "test_function_sup")]:
                assert pairs[("bounded", first, second)] == "PASS"
            if r.scenario.source_space.kind in ("HINF", "GROWTH"):
                assert pairs[("bounded", "density_sup", "monomial_sup")] == "PASS"
            degenerate = r.scenario.source_space.kind == "HINF"
            assert (r.scenario.name in excluded) == degenerate
            assert pairs[("compact", "sum_boundary_limit", "boundary_limit")] == "PASS"
            if ("compact", "boundary_limit", "test_function_limit") in pairs:
                assert pairs[("compact", "boundary_limit", "test_function_limit")] == "PASS"
            else:
                # only the constant probe is dropped; with a single k=0 term nothing remains
                assert degenerate and len(r.report.terms) == 1


def test_check_runs_are_byte_identical(tmp_path, fixtures_path):
    with criterion("byte-identical check reports") as d:
        outs = []
        for i in range(2):
            out = tmp_path / f"report{i}.json"
            r = subprocess.run([sys.executable, "-m", "wdcop.cli", "check", str(fixtures_path), "--out", str(out)],
                               capture_output=True, text=True)
            assert r.returncode == 0, r.stderr
            outs.append(out.read_bytes())
        d["msg"] = f"{len(outs[0])} bytes each"
        assert outs[0] == outs[1]
