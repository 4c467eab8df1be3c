from fractions import Fraction
from math import comb

import gmpy2
import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smspin.mathkit import (GaussRat, JetWindow, JetWindowError, LaurentTaylorJet, QuadraticNumber, SpacetimePoly,
                            all_exponents, exact_array, jet_invert, ode_integrate, linear, NonFiniteStateError,
                            quadrature_line, quadrature_nodes, rational_sqrt, to_complex)
from smspin.mathkit.scalars import _surd_float

small = st.fractions(min_value=-20, max_value=20, max_denominator=50)
gauss = st.builds(GaussRat, small, small)


# --- exact scalars -----------------------------------------------------------

@given(gauss, gauss, gauss)
def test_gaussrat_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@given(gauss, gauss)
def test_gaussrat_matches_complex(a, b):
    assert complex(a * b) == pytest.approx(complex(a) * complex(b), rel=1e-12, abs=1e-12)


def test_gaussrat_rejects_float_complex():
    with pytest.raises(TypeError):
        GaussRat(1) + 0.5j


@pytest.mark.parametrize("q, root", [(Fraction(9, 16), Fraction(3, 4)), (0, 0), (Fraction(49), 7)])
def test_rational_sqrt(q, root):
    assert rational_sqrt(q) == GaussRat(root)


@pytest.mark.parametrize("q", [Fraction(2), Fraction(-4), Fraction(3, 4)])
def test_rational_sqrt_rejects(q):
    with pytest.raises(ValueError):
        rational_sqrt(q)


@given(small, small, st.sampled_from([2, 3, 5, Fraction(63, 64), Fraction(255, 256)]))
def test_quadratic_number_arithmetic(p, q, d):
    x = QuadraticNumber(p, q, d)
    y = QuadraticNumber(q, 1, d)
    with mpmath.workdps(40):
        r = mpmath.sqrt(mpmath.mpf(d.numerator if isinstance(d, Fraction) else d)
                        / (d.denominator if isinstance(d, Fraction) else 1))
        want = (mpmath.mpf(p.numerator) / p.denominator + mpmath.mpf(q.numerator) / q.denominator * r) * \
               (mpmath.mpf(q.numerator) / q.denominator + r)
        assert complex(x * y).real == pytest.approx(float(want), rel=1e-13, abs=1e-13)


def test_surd_conversion_has_no_cancellation():
    # 1 - sqrt(1 - 1/64^2) cancels almost completely in naive float arithmetic
    d = gmpy2.mpq(4095, 4096)
    got = _surd_float(gmpy2.mpq(1), gmpy2.mpq(-1), d)
    with mpmath.workdps(50):
        want = 1 - mpmath.sqrt(mpmath.mpf(4095) / 4096)
    assert got == pytest.approx(float(want), rel=1e-15)
    assert complex(QuadraticNumber(1, -1, Fraction(4095, 4096))).real == pytest.approx(float(want), rel=1e-15)


def test_exact_array_roundtrip():
    a = exact_array([[1, Fraction(1, 3)], [GaussRat(0, 2), -5]])
    np.testing.assert_allclose(to_complex(a), [[1, 1 / 3], [2j, -5]])


# --- jets -------------------------------------------------------------------

W = JetWindow(-4, 6, 4)


@pytest.mark.parametrize("exact", [True, False])
def test_geometric_series_coefficients(exact):
    # 1 / (1 - s - r) = sum C(i+j, i) s^i r^j
    s, r = LaurentTaylorJet.s_var(W, exact), LaurentTaylorJet.r_var(W, exact)
    inv = jet_invert(1 - s - r)
    for i in range(W.s_max + 1):
        for j in range(W.r_max + 1):
            c = inv.coefficient(i, j)
            assert complex(c) == pytest.approx(comb(i + j, i))


def test_laurent_inverse_tracks_precision():
    s = LaurentTaylorJet.s_var(W)
    x = s * s * (1 + s)  # s^2 (1 + s)
    inv = x.inverse()
    assert inv.lo == -2
    # five known orders of x give five known orders of 1/x
    assert inv.prec == 3
    prod = inv * x
    assert prod.coefficient(0) == GaussRat(1)
    for k in range(1, prod.prec):
        assert not prod.coefficient(k)


def test_window_overflow_raises():
    s = LaurentTaylorJet.s_var(JetWindow(-2, 3, 1))
    with pytest.raises(JetWindowError):
        (s * s * s).inverse()


@given(st.lists(small, min_size=3, max_size=3), st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
@settings(max_examples=25, deadline=None)
def test_jet_sqrt_and_evaluate(cs, sv, rv):
    s, r = LaurentTaylorJet.s_var(W, False), LaurentTaylorJet.r_var(W, False)
    a, b, c = (float(x) / 40 for x in cs)
    x = 1 + a * s + b * r + c * s * r
    root = x.sqrt()
    # truncation error is O(0.3^5)
    want = np.sqrt(1 + a * sv + b * rv + c * sv * rv)
    assert complex(root.evaluate(sv, rv)) == pytest.approx(want, abs=5e-3)
    assert np.allclose((root * root).coef, x.coef)


def test_mixed_windows_rejected():
    with pytest.raises(ValueError):
        LaurentTaylorJet.s_var(W) + LaurentTaylorJet.s_var(JetWindow(-2, 2, 2))


# --- polynomials ------------------------------------------------------------

@given(st.integers(0, 2**32 - 1), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_poly_derivative_matches_finite_difference(seed, axis):
    rng = np.random.default_rng(seed)
    p = SpacetimePoly.random(rng, 3, (2,))
    x = rng.uniform(-1, 1, size=(5, 4))
    h = 1e-4
    e = np.zeros(4)
    e[axis] = h
    fd = (p(x + e) - p(x - e)) / (2 * h)
    np.testing.assert_allclose(p.derive(axis)(x), fd, atol=1e-6)


def test_poly_shift_and_product():
    rng = np.random.default_rng(3)
    p = SpacetimePoly.random(rng, 2)
    q = SpacetimePoly.random(rng, 2)
    x0 = np.array([0.1, -0.2, 0.3, 0.05])
    pts = rng.uniform(-1, 1, size=(7, 4))
    np.testing.assert_allclose(p.shift(x0)(pts), p(pts + x0), atol=1e-12)
    pq = p.bilinear(q, np.multiply)
    np.testing.assert_allclose(pq(pts), p(pts) * q(pts), atol=1e-12)
    assert pq.degree <= 4


@pytest.mark.parametrize("degree, count", [(0, 1), (1, 5), (2, 15), (3, 35)])
def test_exponent_counts(degree, count):
    assert len(list(all_exponents(degree))) == count


# --- ODE and quadrature -----------------------------------------------------

def test_rk4_fourth_order():
    G = np.array([[0, 1], [-1, 0]], complex)
    exact = np.array([np.cos(1.0), -np.sin(1.0)])
    errs = [np.abs(ode_integrate(linear(lambda t: G), [1, 0], 1.0, n)[-1].value - exact).max() for n in (10, 20)]
    assert 14 < errs[0] / errs[1] < 18


def test_rk4_non_finite_state():
    with pytest.raises(NonFiniteStateError), np.errstate(over="ignore", invalid="ignore"):
        ode_integrate(lambda t, y: y * y, [1e200], 1.0, 5)


@pytest.mark.parametrize("nodes", [4, 8, 32])
def test_quadrature_polynomial_exactness(nodes):
    # every panel integrates degree 7 exactly
    val = quadrature_line(lambda t: t**7 - 2 * t**3, 1.5, nodes)
    assert val == pytest.approx(1.5**8 / 8 - 1.5**4 / 2, rel=1e-13)


def test_quadrature_weights_sum_to_length():
    t, w = quadrature_nodes(2.5, 20, start=-1)
    assert w.sum() == pytest.approx(2.5)
    assert t.min() > -1 and t.max() < 1.5
