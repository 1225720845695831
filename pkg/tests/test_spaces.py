import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wdcop import analytic as an
from wdcop import spaces as sp
from wdcop.errors import DomainError

mp.mp.dps = 30


def hardy2_series_norm(a, gamma, terms=2000):
    """Parseval: ||f||_{H^2}^2 = sum |c_l|^2, coefficients in high precision."""
    a = mp.mpc(a)
    scale = (1 - abs(a) ** 2) ** gamma
    s = mp.nsum(lambda l: (scale * mp.rf(2 * gamma, l) / mp.factorial(l)) ** 2 * abs(a) ** (2 * l),
                [0, mp.inf])
    return float(mp.sqrt(s))


def bergman2_series_norm(a, gamma, alpha):
    """||f||_{A^2_alpha}^2 = sum |c_l|^2 l! Gamma(alpha+2) / Gamma(l+alpha+2)."""
    a = mp.mpc(a)
    scale = (1 - abs(a) ** 2) ** gamma

    def term(l):
        c = scale * mp.rf(2 * gamma, l) / mp.factorial(l) * abs(a) ** l
        return c ** 2 * mp.factorial(l) * mp.gamma(alpha + 2) / mp.gamma(l + alpha + 2)
    return float(mp.sqrt(mp.nsum(term, [0, mp.inf])))


# -- exponent table and parameter ranges -------------------------------------

@pytest.mark.parametrize("space,value", [
    (sp.SpaceSpec.hinf(), 0.0),
    (sp.SpaceSpec.bergman(2, 0), 1.0),
    (sp.SpaceSpec.hardy(4), 0.25),
    (sp.SpaceSpec.growth(2), 2.0),
    (sp.SpaceSpec.bergman(4, 1), 0.75),
    (sp.SpaceSpec.hardy(2), 0.5),
])
def test_growth_exponent_table(space, value):
    assert sp.growth_exponent(space) == value
    assert space.growth_exponent == value


@pytest.mark.parametrize("kind,p,alpha", [
    ("BERGMAN", 2, -2), ("BERGMAN", 2, -1), ("BERGMAN", 0, 0), ("HARDY", -1, None),
    ("GROWTH", None, 0), ("GROWTH", None, -1), ("HARDY", None, None), ("LP", 2, None),
])
def test_space_parameter_ranges(kind, p, alpha):
    with pytest.raises(DomainError):
        sp.SpaceSpec(kind, p, alpha)


def test_weights():
    w = sp.Weight.power(1.5)
    assert w(0.5) == pytest.approx(0.75 ** 1.5)
    assert sp.Weight.unit()(0.999) == 1
    s = sp.Weight.sampled([0, 0.5, 1.0], [1.0, 0.5, 0.1])
    r = np.linspace(0, 1, 101)
    v = s.radial(r)
    assert np.all(v > 0) and np.all(np.diff(v) <= 0)  # monotone data, monotone interpolant
    assert s(0.5j) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        sp.Weight.power(-1)
    with pytest.raises(DomainError):
        sp.Weight.sampled([0, 0.5], [1.0, 0.0])


def test_quadrature_config_ranges():
    with pytest.raises(DomainError):
        sp.QuadratureConfig(n_angles=100)
    with pytest.raises(DomainError):
        sp.QuadratureConfig(r_max=1.0)


# -- Hardy norms --------------------------------------------------------------

def test_hardy_norm_of_constant():
    assert sp.hardy_norm(an.polynomial([3 - 4j]), 2) == pytest.approx(5, rel=1e-15)


@pytest.mark.parametrize("p", [0.5, 1, 2, 4])
@pytest.mark.parametrize("n", [0, 1, 7, 64])
def test_hardy_norm_of_monomials(p, n):
    assert sp.hardy_norm(an.monomial(n), p) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("a", [0.0, 0.5, 0.9 * np.exp(1j * np.pi / 4), -0.95])
def test_hardy_norm_of_normalized_probe(a):
    oracle = hardy2_series_norm(a, 0.5)
    assert oracle == pytest.approx(1.0, abs=1e-12)
    assert sp.hardy_norm(an.test_function(a, 0.5), 2) == pytest.approx(oracle, abs=1e-6)
    assert sp.hardy_norm(an.ProbeKernel(a, 0.5), 2) == pytest.approx(oracle, abs=1e-6)


def test_hardy_circle_means_are_monotone():
    rng = np.random.default_rng(11)
    for _ in range(5):
        f = an.polynomial(rng.normal(size=12) + 1j * rng.normal(size=12))
        for p in (1, 2, 3):
            m = sp.circle_means(f, p, sp.hardy_radii(f), 1024)
            assert np.all(np.diff(m) >= -1e-13 * m[1:])


# -- Bergman norms ------------------------------------------------------------

def test_bergman_norm_of_constant():
    for alpha in (-0.5, 0, 3):
        assert sp.bergman_norm(an.polynomial([1]), 2, alpha) == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("n", [0, 1, 4, 17, 64, 256])
def test_bergman_norm_of_monomials(n):
    assert sp.bergman_norm(an.monomial(n), 2, 0) == pytest.approx((n + 1) ** -0.5, abs=1e-8)


@pytest.mark.parametrize("a", [0.0, 0.6, 0.5j, 0.9 * np.exp(1j * np.pi / 4)])
def test_bergman_norm_of_normalized_probe(a):
    alpha, p = 1.0, 2.0
    g = (alpha + 2) / p
    oracle = bergman2_series_norm(a, g, alpha)
    assert oracle == pytest.approx(1.0, abs=1e-12)
    assert sp.bergman_norm(an.test_function(a, g), p, alpha) == pytest.approx(oracle, abs=1e-6)


def test_bergman_rejects_bad_alpha():
    with pytest.raises(DomainError):
        sp.bergman_norm(an.monomial(1), 2, -1)


# -- weighted sup norms ---------------------------------------------------------

def test_sup_of_one_is_one():
    assert sp.weighted_sup_norm(an.polynomial([1]), sp.Weight.unit()).value == 1


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.5])
@pytest.mark.parametrize("n", [1, 3, 10, 100, 1000])
def test_sup_of_monomial_against_calculus(alpha, n):
    r2 = n / (n + 2 * alpha)
    exact = (1 - r2) ** alpha * r2 ** (n / 2)
    got = sp.weighted_sup_norm(an.Power(n), sp.Weight.power(alpha)).value
    assert got == pytest.approx(exact, abs=1e-4)
    assert got <= exact * (1 + 1e-12)


@pytest.mark.parametrize("a", [0.0, 0.5, 0.9j, 0.99 * np.exp(2j)])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 3.0])
def test_sup_of_normalized_probe_is_at_most_one(a, alpha):
    v = sp.weighted_sup_norm(an.ProbeKernel(a, alpha), sp.Weight.power(alpha)).value
    assert v <= 1 + 1e-8
    assert v >= 1 - 1e-4  # attained near z = a


def test_sup_reports_divergence_instead_of_raising():
    class Blowup:
        closed_disk = False

        def __call__(self, z):
            with np.errstate(divide="ignore"):
                return 1.0 / (1.0 - np.abs(z))
    est = sp.weighted_sup_norm(Blowup(), sp.Weight.unit())
    assert est.divergent and math.isinf(est.value)


# -- dispatch -----------------------------------------------------------------

def test_norm_examples():
    assert sp.norm(an.monomial(0), sp.SpaceSpec.hinf()) == 1
    assert sp.norm(an.monomial(4), sp.SpaceSpec.bergman(2, 0)) == pytest.approx(5 ** -0.5, abs=1e-12)
    assert sp.norm(an.monomial(4), sp.SpaceSpec.hardy(2)) == pytest.approx(1, abs=1e-12)


ALL_KINDS = [sp.SpaceSpec.hinf(), sp.SpaceSpec.growth(1.5), sp.SpaceSpec.bergman(3, 0.5),
             sp.SpaceSpec.hardy(1.5)]


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3), st.integers(0, 3))
def test_norm_is_homogeneous(c, which):
    X = ALL_KINDS[which]
    f = an.polynomial([1, 0.5 - 0.2j, 0, 0.3j])
    assert sp.norm(c * f, X) == pytest.approx(abs(c) * sp.norm(f, X), rel=1e-10)


def _random_polynomial(seed, n=40):
    # Gaussian coefficients put many zeros close to the unit circle, the hard
    # case for the angular rule when p is not an even integer
    rng = np.random.default_rng(seed)
    return an.polynomial(rng.normal(size=n) + 1j * rng.normal(size=n))


@pytest.mark.parametrize("seed", range(3))
def test_quadrature_converged_under_doubling(seed):
    f = _random_polynomial(seed)
    q = sp.QuadratureConfig()
    for p in (1, 2, 3, 4):
        assert abs(sp.hardy_norm(f, p, q) - sp.hardy_norm(f, p, q.doubled())) < 1e-8
    for p in (2, 4):
        for alpha in (-0.5, 0, 2):
            assert abs(sp.bergman_norm(f, p, alpha, q) - sp.bergman_norm(f, p, alpha, q.doubled())) < 1e-8


@pytest.mark.parametrize("alpha", [-0.5, 2])
def test_bergman_quadrature_converged_for_odd_exponent(alpha):
    f = _random_polynomial(0)
    q = sp.QuadratureConfig()
    assert abs(sp.bergman_norm(f, 1, alpha, q) - sp.bergman_norm(f, 1, alpha, q.doubled())) < 1e-8


# -- growth estimates -----------------------------------------------------------

@pytest.mark.parametrize("space,slope,tol", [
    (sp.SpaceSpec.hardy(2), 0.0, 0.05),
    (sp.SpaceSpec.bergman(2, 0), -0.5, 0.05),
    (sp.SpaceSpec.growth(1), -1.0, 0.1),
])
def test_monomial_norm_exponent(space, slope, tol):
    fit = sp.monomial_norm_exponent(space)
    assert abs(fit.slope - slope) <= tol


def test_growth_constant_examples():
    for X in ALL_KINDS:
        assert sp.growth_bound_constant(X, 1, [an.monomial(0)]).value == 0
    assert sp.growth_bound_constant(sp.SpaceSpec.hinf(), 0, [an.monomial(1)]).value == pytest.approx(1)


def test_growth_constant_stable_for_hardy_probes():
    X = sp.SpaceSpec.hardy(2)
    probes = [an.ProbeKernel(r * np.exp(1j * t), 0.5) for r in (0, 0.5, 0.9, 0.99) for t in (0, 2)]
    grid = sp.DiskGrid(12, 512)
    c1 = sp.growth_bound_constant(X, 0, probes, grid)
    c2 = sp.growth_bound_constant(X, 0, probes, grid.refined())
    assert math.isfinite(c1.value) and c1.status != "DIVERGENT"
    assert abs(c2.value - c1.value) < 0.05 * c1.value
