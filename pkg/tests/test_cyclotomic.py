import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gpspectra.cyclotomic import (
    CycInt,
    IntPoly,
    expand_periods,
    gaussian_periods,
    integrality_index,
    orbit_factors,
    period_polynomial,
    periods_are_generator_independent,
    primitive_root_mod,
    reduced_period_polynomial,
)
from gpspectra.finite_field import build_field


def _numeric_periods_prime(p: int, k: int) -> list[complex]:
    """Periods of GF(p) straight from a primitive root, no field tables."""
    g = primitive_root_mod(p)
    n = (p - 1) // k
    return [
        sum(cmath.exp(2j * math.pi * pow(g, i + k * j, p) / p) for j in range(n))
        for i in range(k)
    ]


def _numeric_poly(roots) -> np.ndarray:
    return np.real_if_close(np.poly(roots), tol=1e6)


@pytest.mark.parametrize(
    "p,k,expected",
    [
        # Gauss: x^3 + x^2 - (p-1)/3 x - (p(a+3)-1)/27 with 4p = a^2 + 27 b^2
        (7, 3, [-1, -2, 1, 1]),
        (13, 3, [1, -4, 1, 1]),
        (13, 2, [-3, 1, 1]),
        (5, 2, [-1, 1, 1]),
        (11, 5, [1, 3, -3, -4, 1, 1]),  # minimal polynomial of 2cos(2pi/11)
    ],
)
def test_classical_period_polynomials(p, k, expected):
    F = build_field(p, 1)
    assert period_polynomial(F, k).coeffs == tuple(expected)


@pytest.mark.parametrize("p,k", [(7, 3), (13, 4), (31, 5), (31, 6), (41, 8), (61, 12)])
def test_periods_match_direct_numerics(p, k):
    F = build_field(p, 1)
    ours = sorted((c.embed_complex() for c in gaussian_periods(F, k)), key=lambda z: (z.real, z.imag))
    ref = sorted(_numeric_periods_prime(p, k), key=lambda z: (z.real, z.imag))
    assert np.allclose(ours, ref, atol=1e-9)
    poly = period_polynomial(F, k)
    assert np.allclose(poly.coeffs[::-1], _numeric_poly(ref), atol=1e-6)


@pytest.mark.parametrize("p,m,k", [(2, 4, 3), (3, 4, 5), (5, 2, 4), (2, 6, 9), (3, 3, 13)])
def test_exact_and_modular_agree(p, m, k):
    F = build_field(p, m)
    periods = gaussian_periods(F, k)
    assert expand_periods(p, periods, "exact") == expand_periods(p, periods, "modular")


@pytest.mark.parametrize("p,m,k", [(2, 4, 3), (3, 4, 4), (5, 3, 31), (7, 2, 6), (2, 8, 15)])
def test_period_sum_and_polynomial_shape(p, m, k):
    F = build_field(p, m)
    periods = gaussian_periods(F, k)
    total = periods[0]
    for c in periods[1:]:
        total = total + c
    assert total.as_rational_integer() == -1
    psi = period_polynomial(F, k)
    assert psi.degree == k
    assert psi.coeffs[-1] == 1 and psi.coeffs[-2] == 1


def test_integral_periods_gf16():
    # 3 | (16-1)/(2-1): periods of Gamma(3, 16) are rational integers
    F = build_field(2, 4)
    vals = sorted(c.as_rational_integer() for c in gaussian_periods(F, 3))
    assert vals == [-3, 1, 1]
    psi = period_polynomial(F, 3)
    assert psi.integer_roots() == [-3, 1, 1]


def test_reduced_polynomial_roots():
    F = build_field(2, 4)
    psi = period_polynomial(F, 3)
    star = reduced_period_polynomial(psi, 3)
    assert star.integer_roots() == sorted(3 * r + 1 for r in [-3, 1, 1])


def test_orbit_factors_multiply_back():
    F = build_field(3, 4)
    k = 10
    factors = orbit_factors(F, k)
    assert len(factors) == integrality_index(3, 4, k) == 10
    prod = IntPoly([1])
    for f in factors:
        prod = prod * f
    assert prod == period_polynomial(F, k)


@pytest.mark.parametrize("p,m,k", [(5, 2, 3), (2, 6, 7), (3, 4, 5), (7, 2, 8)])
def test_generator_independence(p, m, k):
    F = build_field(p, m)
    q = F.q
    alt = next(int(F.exp_table[j]) for j in range(2, q - 1) if math.gcd(j, q - 1) == 1)
    assert periods_are_generator_independent(F, k, alt)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 23).filter(lambda p: all(p % d for d in range(2, p))), st.data())
def test_cycint_ring_laws(p, data):
    vec = st.lists(st.integers(-5, 5), min_size=p, max_size=p)
    a, b, c = (CycInt(p, data.draw(vec)) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert (a * b).embed_complex() == pytest.approx(a.embed_complex() * b.embed_complex(), abs=1e-6)
    assert a - a == CycInt.from_int(p, 0)
    # the p powers of zeta sum to zero
    s = CycInt.zeta(p, 0)
    for j in range(1, p):
        s = s + CycInt.zeta(p, j)
    assert s.as_rational_integer() == 0


def test_intpoly_roots_and_str():
    f = IntPoly.from_roots([-99, -649, -979, 451, 1276])
    assert f.integer_roots() == [-979, -649, -99, 451, 1276]
    assert str(IntPoly([-1, 0, 1])) == "x^2 - 1"
    assert IntPoly([0, 0, 1]).integer_roots() == [0, 0]
