import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wdcop import analytic as an
from wdcop import operator as op
from wdcop import spaces as sp
from wdcop.errors import SelfMapViolation

P = an.polynomial
IDENTITY = P([0, 1])
HALF = P([0, 0.5])


def build(symbols, tau=IDENTITY):
    return op.OperatorSpec.build(symbols, tau)


# -- self-map validation --------------------------------------------------------

def test_identity_touches_boundary():
    chk = op.self_map_check(IDENTITY)
    assert chk.sup == pytest.approx(1.0) and not chk.strict


def test_half_identity_is_strict():
    chk = op.self_map_check(HALF)
    assert chk.sup == pytest.approx(0.5) and chk.strict


def test_quadratic_self_map_touches_boundary_at_one():
    chk = op.self_map_check(P([0, 0.5, 0.5]))
    assert chk.sup == pytest.approx(1.0, abs=1e-12) and not chk.strict
    assert chk.argmax == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("coeffs", [[0.6, 0.6], [0, 1.001], [0, 0.5, 0.6], [1.0]])
def test_self_map_violations(coeffs):
    with pytest.raises(SelfMapViolation):
        op.self_map_check(P(coeffs))


def test_automorphism_is_a_self_map():
    chk = op.self_map_check(an.mobius(0.7 - 0.2j))
    assert chk.sup == pytest.approx(1.0, abs=1e-9) and not chk.strict


# -- application ----------------------------------------------------------------

def test_apply_identity_operator():
    f = P([1, -2, 0.5j, 3])
    assert op.apply(build([P([1])]), f, 0.3) == pytest.approx(f(0.3), rel=1e-15)


def test_apply_derivative_at_half():
    S = build([P([0]), P([1])], HALF)
    assert op.apply(S, an.monomial(2), 0.4) == pytest.approx(0.4, rel=1e-15)


def test_apply_to_constant_returns_first_symbol():
    u0 = P([0.5, 1j, 2])
    S = build([u0, P([3, 1]), P([0, 0, 1])], P([0.1, 0.3, 0.2]))
    z = np.array([0, 0.5j, -0.7 + 0.1j])
    np.testing.assert_allclose(op.apply(S, an.monomial(0), z), u0(z), rtol=1e-15)


def _random_operator(seed):
    rng = np.random.default_rng(seed)
    syms = [P(rng.normal(size=4) + 1j * rng.normal(size=4)) for _ in range(3)]
    return build(syms, P([0.1, 0.4, 0.3j]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5), st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3))
def test_linearity(seed, a, b):
    S = _random_operator(seed)
    rng = np.random.default_rng(seed + 100)
    f = P(rng.normal(size=9) + 1j * rng.normal(size=9))
    g = P(rng.normal(size=6) + 1j * rng.normal(size=6))
    z = 0.9 * np.exp(1j * np.linspace(0, 6, 11)) * np.linspace(0, 1, 11)
    lhs = op.apply(S, a * f + b * g, z)
    rhs = a * op.apply(S, f, z) + b * op.apply(S, g, z)
    scale = abs(a) * np.abs(op.apply(S, f, z)) + abs(b) * np.abs(op.apply(S, g, z)) + 1e-300
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * np.maximum(scale, 1.0))


@pytest.mark.parametrize("seed", range(4))
def test_decomposition_into_single_terms(seed):
    S = _random_operator(seed)
    f = an.ProbeKernel(0.5 + 0.3j, 0.75, 1)
    z = 0.95 * np.exp(1j * np.linspace(0, 6, 13)) * np.linspace(0, 1, 13)
    total = op.apply(S, f, z)
    parts = sum(op.apply(S.single_term(k), f, z) for k in range(S.n + 1))
    np.testing.assert_allclose(total, parts, rtol=1e-12, atol=1e-12 * np.max(np.abs(total)))


def test_apply_flags_boundary_for_open_disk_functions():
    f = an.TaylorFunction([1, 1, 1], closed_disk=False)
    out = op.apply(build([P([1])]), f, np.array([0.5, 1.0]))
    assert np.isfinite(out[0]) and np.isnan(out[1])


# -- target norms and lower bounds -------------------------------------------------

def test_target_norm_examples():
    S = build([P([1])])
    assert op.target_norm(S, an.monomial(0), sp.Weight.unit()).value == 1
    alpha, n = 1.5, 12
    r2 = n / (n + 2 * alpha)
    exact = (1 - r2) ** alpha * r2 ** (n / 2)
    assert op.target_norm(S, an.Power(n), sp.Weight.power(alpha)).value == pytest.approx(exact, abs=1e-4)
    Z = build([P([0]), P([0])])
    for f in (an.monomial(3), an.ProbeKernel(0.9, 1.0, 1)):
        assert op.target_norm(Z, f, sp.Weight.unit()).value == 0


def test_lower_bound_examples():
    hinf = sp.SpaceSpec.hinf()
    assert op.operator_norm_lower_bound(build([P([0])]), hinf, sp.Weight.unit()).value == 0
    probes = [an.Power(n) for n in range(0, 65, 8)]
    lb = op.operator_norm_lower_bound(build([P([1])]), hinf, sp.Weight.unit(), probes)
    assert lb.value == pytest.approx(1.0, abs=1e-12)
    lb = op.operator_norm_lower_bound(build([P([2])]), hinf, sp.Weight.unit(), [an.monomial(0)])
    assert lb.value == pytest.approx(2.0)


def test_lower_bound_monotone_in_probe_set():
    S = build([P([1, 0.5]), P([0, 0.2])], P([0, 0.6]))
    X = sp.SpaceSpec.growth(1)
    probes = op.default_probes(X, S.n, n_monomials=8, a_shells=3, a_angles=2)
    small = op.operator_norm_lower_bound(S, X, sp.Weight.power(1), probes[:10]).value
    big = op.operator_norm_lower_bound(S, X, sp.Weight.power(1), probes).value
    assert big >= small


def test_scaled_tau_is_strict():
    S = build([P([1])])
    T = S.scaled_tau(0.9)
    assert T.strict and T.tau(0.5) == pytest.approx(0.45) and not math.isnan(T.tau_sup)
