from fractions import Fraction

import numpy as np
import pytest

from smspin import clifford as cl
from smspin.fieldtheory import (ActionOracle, FieldTriple, Form, GaugeTransformField, LinearizedFields,
                                MissingFieldError, abelian_model, antisymmetrize, apply_rep_form, codifferential,
                                codifferential_via_star, compatibility_residual, cov_d, covariant_box, curvature,
                                dirac_current, dirac_operator, divergence, el_residual, exterior_d, gauge_apply,
                                gauge_apply_at, hodge_star, interaction_form, lagrangian_density, levi_civita,
                                lichnerowicz_residual, linearized_sources, perturbation_operator,
                                random_linearized_fields, source_scale, temporal_component, temporal_gauge,
                                toy_electroweak_model, yukawa_coupling)
from smspin.fieldtheory.gauge import entry_time
from smspin.mathkit import SpacetimePoly

TOY = toy_electroweak_model()
AB = abelian_model()


def pts(seed=0, n=20, r=0.5):
    return np.random.default_rng(seed).uniform(-r, r, size=(n, 4))


def rand_form(rng, k, vshape=(), degree=2):
    c = SpacetimePoly.random(rng, degree, (4,) * k + vshape)
    return Form(c.map(lambda a: antisymmetrize(a, k)), k)


# --- forms --------------------------------------------------------------------

@pytest.mark.parametrize("k", range(4))
def test_d_squared_vanishes(k):
    f = rand_form(np.random.default_rng(k), k, degree=3)
    assert np.max(np.abs(exterior_d(exterior_d(f))(pts()))) < 1e-12


@pytest.mark.parametrize("k, sign", [(0, -1), (1, 1), (2, -1), (3, 1), (4, -1)])
def test_star_star_sign_table(k, sign):
    f = rand_form(np.random.default_rng(10 + k), k)
    np.testing.assert_allclose(hodge_star(hodge_star(f))(pts()), sign * f(pts()), atol=1e-12)


def test_star_of_volume():
    vol = Form(SpacetimePoly.constant(levi_civita().astype(complex)), 4)
    assert hodge_star(vol)(np.zeros((1, 4)))[0] == pytest.approx(-1)


def test_codifferential_of_one_form_is_minus_divergence():
    rng = np.random.default_rng(5)
    w = rand_form(rng, 1, degree=3)
    up = [w.poly[a] * (-1 if a == 0 else 1) for a in range(4)]
    div = sum(up[a].derive(a) for a in range(4))
    x = pts(1)
    np.testing.assert_allclose(codifferential(w)(x), -div(x), atol=1e-12)
    np.testing.assert_allclose(codifferential_via_star(w)(x), codifferential(w)(x), atol=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_codifferential_matches_star_composition(k):
    f = rand_form(np.random.default_rng(20 + k), k, degree=2)
    np.testing.assert_allclose(codifferential(f)(pts()), codifferential_via_star(f)(pts()), atol=1e-12)


def test_form_validation():
    with pytest.raises(ValueError):
        Form(SpacetimePoly.zero((4,)), 5)
    with pytest.raises(ValueError):
        Form(SpacetimePoly.zero((3,)), 1)


# --- covariant operators ------------------------------------------------------

def _random_A(model, rng, degree=1, scale=0.5):
    return Form(SpacetimePoly.random(rng, degree, (4, model.n), scale).map(lambda c: c.real + 0j), 1)


def test_curvature_examples():
    b = 1.0
    A = Form(SpacetimePoly.from_terms([((0, 1, 0, 0), np.array([[0], [0], [b], [0]], complex))], (4, 1)), 1)
    F = curvature(AB, A)(np.zeros((1, 4)))[0]
    want = np.zeros((4, 4, 1))
    want[1, 2], want[2, 1] = b, -b
    np.testing.assert_allclose(F, want)
    c = np.zeros((4, TOY.n))
    c[0, 0], c[1, 1] = 1.0, 1.0
    Fc = curvature(TOY, Form(SpacetimePoly.constant(c + 0j), 1))(np.zeros((1, 4)))[0]
    np.testing.assert_allclose(Fc[0, 1], TOY.algebra.bracket(c[0], c[1]))
    assert not np.any(curvature(TOY, Form.zero(1, (TOY.n,)))(pts()))


@pytest.mark.parametrize("seed", range(3))
def test_d_A_squared_is_curvature_action(seed):
    rng = np.random.default_rng(seed)
    A = _random_A(TOY, rng)
    Phi = SpacetimePoly.random(rng, 2, (TOY.dw,))
    lhs = cov_d(TOY, A, cov_d(TOY, A, Phi, "W"), "W")
    rhs = apply_rep_form(TOY, curvature(TOY, A), Phi, "W")
    np.testing.assert_allclose(lhs(pts()), rhs(pts()), atol=1e-11)


def test_dirac_operator_examples():
    e = np.zeros((4, AB.d), complex)
    e[0, 0] = 1
    assert not np.any(dirac_operator(AB, None, SpacetimePoly.constant(e))(pts()))
    psi = SpacetimePoly.monomial((1, 0, 0, 0), e)
    want = 1j * cl.gamma(0, "upper") @ e
    np.testing.assert_allclose(dirac_operator(AB, None, psi)(np.zeros((1, 4)))[0], want)


def test_dirac_operator_constant_gauge_covariance():
    rng = np.random.default_rng(3)
    f = FieldTriple.random(TOY, rng, degree=2)
    X = rng.normal(size=TOY.n)
    U = GaugeTransformField.constant(TOY, X)
    g = gauge_apply(TOY, f, U, np.zeros(4), order=3)
    Uinv = U.jet(np.zeros(4), 0, "V", inverse=True)(np.zeros((1, 4)))[0]
    lhs = dirac_operator(TOY, g.A, g.psi)(np.zeros((1, 4)))[0]
    rhs = dirac_operator(TOY, f.A, f.psi)(np.zeros((1, 4)))[0] @ Uinv.T
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


@pytest.mark.parametrize("seed", range(3))
def test_dirac_self_adjoint_up_to_divergence(seed):
    rng = np.random.default_rng(seed)
    A = _random_A(TOY, rng)
    plus = lambda c: np.where(TOY.layout.mask("+"), c, 0)
    phi = SpacetimePoly.random(rng, 2, (4, TOY.d)).map(plus)
    psi = SpacetimePoly.random(rng, 2, (4, TOY.d)).map(plus)
    x = pts(seed)
    D = lambda p: dirac_operator(TOY, A, p)
    J = TOY.J
    pair = lambda a, b: np.einsum("nsi,st,nti->n", np.conj(a(x)), J, b(x)).real
    lhs = pair(D(phi), psi) - pair(phi, D(psi))
    rhs = -divergence(dirac_current(TOY, A, phi, psi))(x).real
    np.testing.assert_allclose(lhs, rhs, atol=1e-11)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_lichnerowicz_identity(degree):
    rng = np.random.default_rng(degree)
    A = _random_A(TOY, rng, degree)
    phi = SpacetimePoly.random(rng, degree, (4, TOY.d))
    res = lichnerowicz_residual(TOY, A, phi)(pts())
    scale = np.max(np.abs(covariant_box(TOY, A, phi, "V")(pts())))
    assert np.max(np.abs(res)) <= 1e-10 * max(1, scale)


def test_flat_lichnerowicz():
    phi = SpacetimePoly.random(np.random.default_rng(0), 3, (4, TOY.d))
    assert np.max(np.abs(lichnerowicz_residual(TOY, None, phi)(pts()))) < 1e-11


# --- interactions and Lagrangian ------------------------------------------------

def test_ymh_examples():
    # u(1) acting on C with rho_*(b) = 3i: 2 Re <1, 3i * i> = -6
    m = abelian_model(y_w=Fraction(1))
    v = interaction_form(m, "YMH", np.array([1.0 + 0j]), np.array([1j]))
    np.testing.assert_allclose(v, [-6.0])
    rng = np.random.default_rng(1)
    u = rng.normal(size=TOY.dw) + 1j * rng.normal(size=TOY.dw)
    np.testing.assert_allclose(interaction_form(TOY, "YMH", u, u), 0, atol=1e-13)


def test_ymd1_symmetric():
    rng = np.random.default_rng(2)
    a = TOY.layout.project(rng.normal(size=(4, TOY.d)) + 1j * rng.normal(size=(4, TOY.d)))
    b = TOY.layout.project(rng.normal(size=(4, TOY.d)) + 1j * rng.normal(size=(4, TOY.d)))
    np.testing.assert_allclose(interaction_form(TOY, "YMD-1", a, b), interaction_form(TOY, "YMD-1", b, a),
                               atol=1e-12)


def test_yukawa_properties():
    rng = np.random.default_rng(4)
    psi = TOY.layout.project(rng.normal(size=(4, TOY.d)) + 1j * rng.normal(size=(4, TOY.d)))
    pL, pR = TOY.layout.left(psi), TOY.layout.right(psi)
    Phi = rng.normal(size=TOY.dw) + 1j * rng.normal(size=TOY.dw)
    y = yukawa_coupling(TOY, pL, Phi, pR)
    assert yukawa_coupling(TOY, pL, 0 * Phi, pR) == 0
    assert yukawa_coupling(TOY, pL, 2.5 * Phi, pR) == pytest.approx(2.5 * y)
    assert TOY.yukawa.invariance_residual(TOY, rng) <= 1e-10


def test_lagrangian_examples():
    vac = lagrangian_density(TOY, FieldTriple.vacuum(TOY))
    for v in vac.values():
        assert not np.any(v(pts()))
    Phi = SpacetimePoly.constant(np.array([1.0, 0], complex))
    f = FieldTriple(SpacetimePoly.zero((4, TOY.d)), Form.zero(1, (TOY.n,)), Phi)
    np.testing.assert_allclose(lagrangian_density(TOY, f)["H"](pts()), 0.5)
    # abelian F = dx1 ^ dx2 with a unit generator has <F, F> = 1
    A = Form(SpacetimePoly.from_terms([((0, 1, 0, 0), np.array([[0], [0], [1.0], [0]], complex))], (4, 1)), 1)
    g = FieldTriple(SpacetimePoly.zero((4, AB.d)), A, SpacetimePoly.zero((AB.dw,)))
    np.testing.assert_allclose(lagrangian_density(AB, g)["YM"](pts()), -0.5)


# --- field equations ------------------------------------------------------------

def test_vacuum_and_flat_residuals():
    r = el_residual(TOY, FieldTriple.vacuum(TOY))
    for v in r.at(pts()).values():
        assert not np.any(v)
    c = np.zeros((4, AB.n), complex)
    c[1, 0] = 0.7
    f = FieldTriple(SpacetimePoly.zero((4, AB.d)), Form(SpacetimePoly.constant(c), 1), SpacetimePoly.zero((AB.dw,)))
    assert not np.any(el_residual(AB, f).J(pts()))


@pytest.mark.parametrize("seed", range(3))
def test_noether_identity_and_detector(seed):
    rng = np.random.default_rng(seed)
    f = FieldTriple.random(TOY, rng, degree=2)
    src = el_residual(TOY, f)
    x = pts(seed, 30)
    scale = source_scale(TOY, f, src, x)
    res = compatibility_residual(TOY, f, src)(x)
    assert np.max(np.abs(res)) <= 1e-10 * scale
    # a constant shift of J is invisible to d*, so shift by a linear one
    lin = Form(SpacetimePoly.coordinate(0, (4, TOY.n)).map(lambda c: c * 0 + np.ones_like(c)), 1)
    bumped = type(src)(src.K_L, src.K_R, src.J + lin, src.F)
    assert np.max(np.abs(compatibility_residual(TOY, f, bumped)(x))) > 1e-3


def test_el_residual_constant_gauge_covariance():
    rng = np.random.default_rng(7)
    f = FieldTriple.random(TOY, rng, degree=2, scale=0.4)
    X = rng.normal(size=TOY.n)
    U = GaugeTransformField.constant(TOY, X)
    g = gauge_apply(TOY, f, U, np.zeros(4), order=4)
    o = np.zeros((1, 4))
    r0, r1 = el_residual(TOY, f).at(o), el_residual(TOY, g).at(o)
    Vinv = U.jet(np.zeros(4), 0, "V", inverse=True)(o)[0]
    Winv = U.jet(np.zeros(4), 0, "W", inverse=True)(o)[0]
    np.testing.assert_allclose(r1["K_L"][0], r0["K_L"][0] @ Vinv.T, atol=1e-9)
    np.testing.assert_allclose(r1["F"][0], Winv @ r0["F"][0], atol=1e-9)


def test_action_oracle_agrees_with_residual():
    rng = np.random.default_rng(0)
    f = FieldTriple.random(TOY, rng, degree=1, scale=0.3)
    o = ActionOracle(TOY, nodes=6)
    d = FieldTriple.random(TOY, np.random.default_rng(1), degree=1, scale=0.3)
    var = o.variation(f, d)
    pair = o.residual_pairing(d, el_residual(TOY, f))
    assert abs(var - pair) <= 1e-6 * max(1, abs(var))


# --- gauge transforms -----------------------------------------------------------

def test_gauge_identity_and_higgs_norm():
    rng = np.random.default_rng(9)
    f = FieldTriple.random(TOY, rng)
    x = pts(2, 4)
    same = gauge_apply_at(TOY, f, GaugeTransformField.identity(TOY), x)
    np.testing.assert_allclose(same["Phi"], f.Phi(x), atol=1e-13)
    U = GaugeTransformField.random(TOY, rng)
    moved = gauge_apply_at(TOY, f, U, x)
    np.testing.assert_allclose(np.linalg.norm(moved["Phi"], axis=1), np.linalg.norm(f.Phi(x), axis=1), atol=1e-12)
    assert U.base_defect() <= 1e-12


def test_gauge_composition():
    rng = np.random.default_rng(12)
    f = FieldTriple.random(TOY, rng)
    U1, U2 = GaugeTransformField.random(TOY, rng, scale=0.3), GaugeTransformField.random(TOY, rng, scale=0.3)
    x = pts(5, 3, 0.3)
    # apply U2 to the U1-transformed fields jet by jet at each point
    for p in x:
        g = gauge_apply(TOY, f, U1, p, order=3)
        g = FieldTriple(g.psi.shift(-p), Form(g.A.poly.shift(-p), 1), g.Phi.shift(-p))
        two = gauge_apply_at(TOY, g, U2, p[None])
        both = gauge_apply_at(TOY, f, U1.compose(U2), p[None])
        np.testing.assert_allclose(two["Phi"], both["Phi"], atol=1e-9)
        np.testing.assert_allclose(two["psi"], both["psi"], atol=1e-9)


def test_temporal_gauge():
    x = np.array([[0.1, 0.2, -0.1, 0.05], [-0.3, 0.1, 0.3, 0.0]])
    U0 = temporal_gauge(AB, Form.zero(1, (AB.n,)), steps=50)
    np.testing.assert_allclose(U0.matrix(x), np.broadcast_to(np.eye(1), (2, 1, 1)), atol=1e-14)
    c = 0.7
    V = Form(SpacetimePoly.constant(np.array([[c], [0], [0], [0]], complex)), 1)
    U = temporal_gauge(AB, V, steps=100)
    want = np.exp(-1j * c * (x[:, 0] - entry_time(x)))
    np.testing.assert_allclose(U.matrix(x)[:, 0, 0], want, atol=1e-12)
    Vr = _random_A(TOY, np.random.default_rng(4), 1, 0.3)
    Ur = temporal_gauge(TOY, Vr, steps=200)
    assert np.max(np.abs(temporal_component(TOY, Vr, Ur, x * 0.5))) <= 1e-8


# --- perturbation calculus ------------------------------------------------------

@pytest.mark.parametrize("level", [1, 2, 3])
def test_linearized_sources_vanish_on_zero_fields(level):
    bg = FieldTriple.random(TOY, np.random.default_rng(0), degree=1)
    vac = FieldTriple.vacuum(TOY)
    zero = LinearizedFields({j: vac for j in (1, 2, 3)}, {p: vac for p in ((1, 2), (1, 3), (2, 3))})
    args = {1: ((1,),), 2: ((1, 2),), 3: ()}[level]
    src = linearized_sources(TOY, level, bg, zero, *args)
    for v in src.values():
        assert not np.any(v(pts()))


def test_level_two_dirac_source_needs_w_or_upsilon():
    rng = np.random.default_rng(5)
    bg = FieldTriple.random(TOY, rng, degree=1)
    lf = random_linearized_fields(TOY, rng, degree=1)
    for j in (1, 2):
        f = lf.first[j]
        lf.first[j] = FieldTriple(f.psi, Form.zero(1, (TOY.n,)), SpacetimePoly.zero((TOY.dw,)))
    src = linearized_sources(TOY, 2, bg, lf, (1, 2))
    assert not np.any(src["DL"](pts()))


def test_missing_field():
    with pytest.raises(MissingFieldError):
        linearized_sources(TOY, 2, FieldTriple.vacuum(TOY), LinearizedFields(), (1, 2))


def test_perturbation_n_of_zero():
    bg = FieldTriple.random(TOY, np.random.default_rng(1))
    out = perturbation_operator(TOY, "N", bg, FieldTriple.vacuum(TOY))
    assert not np.any(out(pts()))
