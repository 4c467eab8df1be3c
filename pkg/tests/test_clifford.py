from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smspin import clifford as cl
from smspin.mathkit import GaussRat, exact_array

G = np.diag([-1, 1, 1, 1])
rng0 = np.random.default_rng(11)


def _cvec(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


@pytest.mark.parametrize("a", range(4))
@pytest.mark.parametrize("b", range(4))
def test_anticommutator_exact(a, b):
    up = [cl.gamma(k, "upper", exact=True) for k in range(4)]
    lhs = up[a] @ up[b] + up[b] @ up[a]
    want = exact_array(2 * G[a, b] * np.eye(4, dtype=int))
    assert np.all(lhs == want)


def test_gamma_examples():
    off = np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    np.testing.assert_array_equal(cl.gamma(0), 1j * off)
    np.testing.assert_array_equal(cl.gamma(0, "upper"), -cl.gamma(0))
    np.testing.assert_array_equal(cl.gamma(2, "upper"), cl.gamma(2))
    with pytest.raises(ValueError):
        cl.gamma(4)


def test_gamma5():
    g5 = cl.gamma5(exact=True)
    assert np.all(g5 == exact_array(np.diag([1, 1, -1, -1])))
    assert np.all(g5 @ g5 == exact_array(np.eye(4, dtype=int)))
    for a in range(4):
        ga = cl.gamma(a, exact=True)
        assert not any(bool(x) for x in (g5 @ ga + ga @ g5).flat)


def test_printed_form_matrix_is_hermitian():
    M = cl.printed_dirac_matrix()
    np.testing.assert_array_equal(M, M.conj().T)


def test_clifford_mult_examples():
    np.testing.assert_allclose(cl.clifford_mult(np.array([1.0, 0, 0, 0]), np.array([1, 0, 0, 0], complex)),
                               [0, 0, -1, 0])
    psi = _cvec(rng0, 4)
    null = np.array([1.0, 1, 0, 0])
    np.testing.assert_allclose(cl.clifford_mult(null, cl.clifford_mult(null, psi)), 0, atol=1e-14)
    e0 = np.array([1.0, 0, 0, 0])
    np.testing.assert_allclose(cl.clifford_mult(e0, cl.clifford_mult(e0, psi)), psi)


ints = st.integers(-6, 6)


@given(st.lists(st.fractions(-3, 3, max_denominator=7), min_size=4, max_size=4),
       st.lists(ints, min_size=8, max_size=8))
@settings(max_examples=40, deadline=None)
def test_clifford_square_exact(v, comps):
    v = exact_array(v)
    psi = np.array([GaussRat(comps[k], comps[k + 4]) for k in range(4)], dtype=object)
    lhs = cl.clifford_mult(v, cl.clifford_mult(v, psi))
    gvv = cl.minkowski_dot(v, v)
    assert np.all(lhs == psi * (-gvv))


def test_dirac_form_value_with_skew_adjoint_matrix():
    # with the skew-adjoint choice J = Gamma_5 Gamma_0 this pairing is i; the printed matrix gives 1
    psi, phi = np.array([1, 0, 0, 0], complex), np.array([0, 0, 1, 0], complex)
    assert cl.dirac_form(psi, phi) == pytest.approx(1j)
    assert cl.dirac_form(psi, phi, cl.printed_dirac_matrix()) == pytest.approx(1)


@pytest.mark.parametrize("seed", range(5))
def test_dirac_form_properties(seed):
    rng = np.random.default_rng(seed)
    psi, phi = _cvec(rng, (4, 3)), _cvec(rng, (4, 3))
    X = rng.normal(size=4)
    c = complex(*rng.normal(size=2))
    f = cl.dirac_form
    assert f(cl.clifford_mult(X, psi), phi) == pytest.approx(-f(psi, cl.clifford_mult(X, phi)))
    assert f(phi, psi) == pytest.approx(np.conj(f(psi, phi)))
    assert f(psi, c * phi) == pytest.approx(c * f(psi, phi))
    assert f(c * psi, phi) == pytest.approx(np.conj(c) * f(psi, phi))
    assert f(cl.proj_L(psi), cl.proj_L(phi)) == 0
    assert f(cl.proj_R(psi), cl.proj_R(phi)) == 0


def test_printed_matrix_fails_skew_adjointness():
    rng = np.random.default_rng(4)
    psi, phi, X = _cvec(rng, 4), _cvec(rng, 4), rng.normal(size=4)
    J = cl.printed_dirac_matrix()
    lhs = cl.dirac_form(cl.clifford_mult(X, psi), phi, J)
    rhs = -cl.dirac_form(psi, cl.clifford_mult(X, phi), J)
    assert abs(lhs - rhs) > 1e-3


def test_bullet_degrees():
    rng = np.random.default_rng(2)
    Psi = _cvec(rng, (4, 2))
    np.testing.assert_allclose(cl.bullet(0, np.eye(2), Psi), Psi)
    B = np.zeros((4, 2, 2), complex)
    B[2] = 3j * np.eye(2)
    np.testing.assert_allclose(cl.bullet(1, B, Psi), 1j * cl.gamma(2, "upper") @ Psi * 3j)
    np.testing.assert_allclose(cl.bullet(2, np.zeros((4, 4, 2, 2)), Psi), 0)


@pytest.mark.parametrize("degree, shape", [(0, (3, 3)), (1, (3, 2, 2)), (2, (4, 4, 3, 3))])
def test_bullet_shape_errors(degree, shape):
    with pytest.raises(ValueError):
        cl.bullet(degree, np.zeros(shape), np.zeros((4, 2)))


def test_bullet_degree_two_needs_antisymmetry():
    B = np.zeros((4, 4, 2, 2))
    B[0, 1] = np.eye(2)
    with pytest.raises(ValueError):
        cl.bullet(2, B, np.zeros((4, 2)))


@pytest.mark.parametrize("seed", range(4))
def test_bullet_one_symmetric_under_real_pairing(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 2, 2)) + 1j * rng.normal(size=(4, 2, 2))
    B = a - np.conj(np.swapaxes(a, -1, -2))  # skew-Hermitian
    P1, P2 = _cvec(rng, (4, 2)), _cvec(rng, (4, 2))
    lhs = cl.dirac_form(P1, cl.bullet(1, B, P2)).real
    rhs = cl.dirac_form(P2, cl.bullet(1, B, P1)).real
    assert lhs == pytest.approx(rhs)


def test_invert_clifford():
    rng = np.random.default_rng(8)
    psi = _cvec(rng, (4, 2))
    e0 = np.array([1.0, 0, 0, 0])
    np.testing.assert_allclose(cl.invert_clifford(e0, cl.clifford_mult(e0, psi)), psi)
    v = exact_array([2, 0, 0, 0])
    chi = exact_array([[1, Fraction(1, 2)], [0, 3], [GaussRat(0, 1), 2], [5, -1]])
    back = cl.clifford_mult(v, cl.invert_clifford(v, chi))
    assert np.all(back == chi)
    with pytest.raises(cl.NullVectorError):
        cl.invert_clifford(np.array([1.0, 1, 0, 0]), psi)


def test_sector_layout():
    lay = cl.SectorLayout(2, 1)
    psi = _cvec(rng0, (4, 3))
    plus = lay.project(psi)
    assert lay.in_sector(plus) and not lay.in_sector(psi)
    np.testing.assert_allclose(lay.left(plus) + lay.right(plus), plus)
    assert not np.any(lay.mask("+") & lay.mask("-"))
