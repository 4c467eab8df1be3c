import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smspin.clifford import slash
from smspin.fieldtheory import Form, abelian_model
from smspin.mathkit import SpacetimePoly
from smspin.microlocal import CausalDomain, build_geometry
from smspin.recovery import (ExtrapolationError, HyperchargeError, MeasurementOracle, ParallelDirectionsError,
                             RecoverySettings, UnreachablePointError, default_grid, default_probes,
                             extract_interaction, gamma_I_at, r_expansion, ray_choice, recover_field,
                             recover_gamma_I, recover_psi_point, richardson, seeded_spinor)

AB = abelian_model()
P = slash(np.array([1.0, 1.0, 0.0, 0.0]))
FRAME = np.eye(3)


def const_spinor(seed=0):
    rng = np.random.default_rng(seed)
    c = np.zeros((4, AB.d), complex)
    c[:2, 0] = rng.normal(size=2) + 1j * rng.normal(size=2)
    c[2:, 1] = rng.normal(size=2) + 1j * rng.normal(size=2)
    return SpacetimePoly.constant(c)


def const_A(coef=(0.3, 0.2, -0.1, 0.4)):
    return Form(SpacetimePoly.constant(np.asarray(coef, complex).reshape(4, 1)), 1)


# --- numerical steps ----------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_richardson_exact_on_quadratics(c):
    s = [1 / 8, 1 / 16, 1 / 32]
    vals = [np.array([c[0] + c[1] * x + c[2] * x * x]) for x in s]
    assert richardson(vals, s, 2)[0] == pytest.approx(c[0], abs=1e-9)


def test_richardson_order_zero_and_errors():
    assert richardson([np.array(1.0), np.array(2.0)], [0.1, 0.05], 0) == 2.0
    with pytest.raises(ExtrapolationError):
        richardson([np.array(1.0)], [0.1], 2)
    with pytest.raises(ExtrapolationError):
        RecoverySettings((0.1, 0.05), richardson_order=2).order


def test_r_expansion_of_polynomial():
    f = {r: np.array([2.0 - 3.0 * r + 0.5 * r ** 3]) for r in (-0.2, -0.1, 0.1, 0.2)}
    lim, c1 = r_expansion(f)
    assert lim[0] == pytest.approx(2.0) and c1[0] == pytest.approx(-3.0)
    with pytest.raises(ExtrapolationError):
        r_expansion({0.1: np.zeros(1)})


def test_settings_validation():
    with pytest.raises(ValueError):
        RecoverySettings((1 / 16, 1 / 8))
    with pytest.raises(ValueError):
        RecoverySettings(r_mode="spline")


def test_non_hypercharged_source_rejected():
    with pytest.raises(HyperchargeError):
        recover_gamma_I({0.1: {0.0: np.zeros((4, 2)), 0.01: np.zeros((4, 2))}}, np.zeros((2, 2)))


# --- the chain at one point ---------------------------------------------------

Y, ELL = np.array([0.0, 0.2, 0.0, 0.0]), 0.25


def test_gamma_I_for_constant_spinor():
    psi = const_spinor()
    oracle = MeasurementOracle(AB, psi)
    est = gamma_I_at(oracle, Y, ELL, FRAME, RecoverySettings((1 / 8, 1 / 16, 1 / 32)))
    want = P @ (ELL * psi.coefs[0])
    assert np.linalg.norm(est.value - want) <= 1e-2 * np.linalg.norm(want)


def test_stencil_and_jet_agree():
    oracle = MeasurementOracle(AB, const_spinor(1), nodes=16)
    jet = gamma_I_at(oracle, Y, ELL, FRAME, RecoverySettings((1 / 8, 1 / 16)))
    sten = gamma_I_at(oracle, Y, ELL, FRAME, RecoverySettings((1 / 8, 1 / 16), r_mode="stencil"))
    np.testing.assert_allclose(sten.value, jet.value, atol=1e-5 * np.linalg.norm(jet.value))


@pytest.mark.parametrize("c", [2.0, -0.5])
def test_source_rescaling(c):
    oracle = MeasurementOracle(AB, const_spinor(2), nodes=16)
    scaled = MeasurementOracle(AB, const_spinor(2), source=np.array([c]), nodes=16)
    st_ = RecoverySettings((1 / 8, 1 / 16))
    a = gamma_I_at(oracle, Y, ELL, FRAME, st_)
    b = gamma_I_at(scaled, Y, ELL, FRAME, st_)
    np.testing.assert_allclose(b.value, a.value, atol=1e-9)
    s0 = st_.s_sequence[0]
    np.testing.assert_allclose(b.limits[s0], c ** 3 * a.limits[s0], atol=1e-9)


def test_extract_interaction_inverts_query():
    A = const_A()
    oracle = MeasurementOracle(AB, const_spinor(3), A, nodes=8, steps=50, normalization=0.5 - 2j)
    geo = build_geometry(list(Y), ELL, 0.05, 0.25, check=False)
    got = extract_interaction(oracle.query(geo).varsigma, geo, AB, A, oracle.normalization, oracle.steps)
    np.testing.assert_allclose(got, oracle.interaction(geo), atol=1e-12)


def test_ray_choice_and_probes():
    rc = ray_choice(Y, [0.2, 0.3, 0.0])
    assert rc.ell == pytest.approx(0.3)
    np.testing.assert_allclose(rc.ray().end, Y, atol=1e-14)
    with pytest.raises(UnreachablePointError):
        ray_choice(Y, Y[1:])
    p1, p2 = default_probes(Y, 0.2)
    np.testing.assert_allclose(p1, -p2)
    assert p1 @ Y[1:] == pytest.approx(0.0)


def test_parallel_probes_rejected():
    oracle = MeasurementOracle(AB, const_spinor())
    p = np.array([0.2, 0.3, 0.0])
    with pytest.raises(ParallelDirectionsError):
        recover_psi_point(Y, (p, p), oracle)


@pytest.mark.parametrize("use_A", [False, True])
def test_point_recovery(use_A):
    rng = np.random.default_rng(4)
    psi = seeded_spinor(AB, rng, degree=2)
    A = const_A() if use_A else None
    oracle = MeasurementOracle(AB, psi, A, nodes=16, steps=100)
    got, info = recover_psi_point(Y, default_probes(Y, 0.2), oracle, A)
    true = psi(Y[None])[0]
    assert np.linalg.norm(got - true) <= 1e-3 * np.linalg.norm(true)
    assert not info["flagged"] and info["g_uu"] < 0


# --- whole field --------------------------------------------------------------

def test_unreachable_points_are_listed():
    oracle = MeasurementOracle(AB, const_spinor(), nodes=8)
    pts = np.array([[0.95, 0.02, 0.0, 0.0], [0.0, 0.9, 0.0, 0.0]])
    rep = recover_field(pts, oracle, settings=RecoverySettings((1 / 8, 1 / 16)), domain=CausalDomain(0.5))
    assert len(rep.unreachable) == 2
    assert np.all(np.isnan(rep.recovered))
    assert rep.max_relative_error == 0.0
    d = rep.to_dict()
    assert all(p["recovered"] is None for p in d["points"])
    assert "seconds" not in d and "seconds" in rep.to_dict(timing=True)


def test_jobs_do_not_change_results():
    oracle = MeasurementOracle(AB, seeded_spinor(AB, np.random.default_rng(5), 1), nodes=8)
    pts = default_grid(1, 2)
    st_ = RecoverySettings((1 / 8, 1 / 16))
    a = recover_field(pts, oracle, settings=st_, jobs=1)
    b = recover_field(pts, oracle, settings=st_, jobs=2)
    np.testing.assert_array_equal(a.recovered, b.recovered)


def test_default_grid_shape():
    g = default_grid(3, 4)
    assert g.shape == (12, 4) and np.all(g[:, 2:] == 0)
