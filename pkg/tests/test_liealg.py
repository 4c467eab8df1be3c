from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smspin import liealg as la

ALGEBRAS = {
    "su2": la.su(2),
    "su3": la.su(3),
    "u1": la.u1(),
    "sm": la.sm_algebra(),
    "su2+u1+u1": la.direct_sum([la.su(2), la.u1(), la.u1()]),
}


@pytest.mark.parametrize("name", ALGEBRAS)
def test_algebra_invariants(name):
    g = ALGEBRAS[name]
    assert g.closure_residual() <= 1e-10
    assert g.adinvariance_residual() <= 1e-10
    np.testing.assert_allclose(g.gram, g.gram.T)
    assert np.all(np.linalg.eigvalsh(g.gram) > 0)


def test_su2_bracket_matches_matrix_commutator():
    g = la.su(2)
    x, y = np.eye(3)[0], np.eye(3)[1]
    X, Y = g.matrix(x), g.matrix(y)
    np.testing.assert_allclose(g.matrix(g.bracket(x, y)), X @ Y - Y @ X, atol=1e-14)
    np.testing.assert_allclose(g.bracket(x, x), 0)


def test_coords_rejects_outside_span():
    with pytest.raises(la.ClosureError):
        la.su(2).coords(np.eye(2))


@pytest.mark.parametrize("name, dim", [("u1", 1), ("su2", 0), ("su3", 0), ("sm", 1), ("su2+u1+u1", 2)])
def test_center_dimension(name, dim):
    z = la.center(ALGEBRAS[name])
    assert z.dim == dim
    g = ALGEBRAS[name]
    for x in z.elements:
        for e in np.eye(g.dim):
            assert np.max(np.abs(g.bracket(x, e))) <= 1e-12


@given(st.lists(st.sampled_from([2, 3]), max_size=2), st.integers(0, 3))
@settings(max_examples=12, deadline=None)
def test_center_dimension_is_additive(simple, k):
    parts = [la.su(n) for n in simple] + [la.u1()] * k
    if not parts:
        return
    assert la.center(la.direct_sum(parts)).dim == k


@pytest.mark.parametrize("y", [Fraction(1), Fraction(0), Fraction(-1, 3), Fraction(2, 3)])
def test_hypercharge_rep(y):
    r = la.hypercharge_rep(y)
    assert r.images[0, 0, 0] == pytest.approx(3j * float(y))
    assert bool(la.is_hypercharged(r)) == (y != 0)


def test_outer_tensor_basics():
    r = la.outer_tensor([la.fundamental_rep(la.su(3)), la.fundamental_rep(la.su(2)), la.hypercharge_rep(1)])
    assert r.dim == 6
    assert r.homomorphism_residual() <= 1e-10
    assert r.skew_residual() <= 1e-14
    t = la.outer_tensor([la.trivial_rep(la.su(3)), la.trivial_rep(la.su(2))])
    assert t.dim == 1 and not np.any(t.images)
    with pytest.raises(ValueError):
        la.outer_tensor([la.adjoint_rep(la.su(3))] * 5, max_dim=1000)


def test_adjoint_rep_is_homomorphism():
    r = la.adjoint_rep(la.su(3))
    assert r.homomorphism_residual() <= 1e-10


def test_trivial_and_zero_reps():
    assert not la.is_hypercharged(la.trivial_rep(la.u1()))
    alg = la.sm_algebra()
    assert la.center_kernel_intersection(la.trivial_rep(alg, 2)) == la.center(alg).dim
    assert la.center_kernel_intersection(la.fundamental_rep(alg)) == 0


@pytest.fixture(scope="module")
def sm():
    return la.standard_model_content()


def test_sm_dims_and_higgs(sm):
    assert tuple(sm.fermions.split) == (24, 21)
    M = sm.higgs.of(sm.u1_generator)
    np.testing.assert_allclose(M, 3j * np.eye(2), atol=1e-14)
    assert np.linalg.det(M) == pytest.approx(-9)
    assert la.center_kernel_intersection(sm.higgs) == 0
    h = la.is_hypercharged(sm.higgs)
    assert h and abs(h.det) > 0


def test_sm_fermions(sm):
    r = sm.fermions
    assert r.homomorphism_residual() <= 1e-10
    assert r.skew_residual() <= 1e-14
    assert r.split_residual() == 0
    assert la.is_hypercharged(r)
    assert la.center_kernel_intersection(r) == 0
    for label, det in la.summand_dets(r, sm.u1_generator):
        assert abs(det) > 1e-6, label


def test_neutrino_singlet_spoils_hypercharge():
    c = la.standard_model_content(la.DEFAULT_GENERATION + (la.NEUTRINO_SINGLET,))
    assert not la.is_hypercharged(c.fermions)


@pytest.mark.parametrize("c", [0.5, -2.0, 3.0])
def test_hypercharge_witness_rescaling(sm, c):
    h = la.is_hypercharged(sm.higgs)
    det = np.linalg.det(sm.higgs.of(c * h.witness))
    assert det == pytest.approx(c ** sm.higgs.dim * h.det)


@pytest.mark.parametrize("row", [
    {"name": "x", "color": 2, "weak": 1, "y": "1", "chirality": "L"},
    {"name": "x", "color": 1, "weak": 1, "y": "1", "chirality": "Q"},
    {"name": "x", "color": 1, "weak": 1, "chirality": "L"},
    {"name": "x", "color": 1, "weak": 1, "y": "one", "chirality": "L"},
])
def test_malformed_generation_table(row):
    with pytest.raises(ValueError):
        la.parse_generation_table([row])


def test_parse_generation_table_roundtrip():
    rows = [{"name": m.name, "color": m.color, "weak": m.weak, "y": str(m.y), "chirality": m.chirality}
            for m in la.DEFAULT_GENERATION]
    assert la.parse_generation_table(rows) == la.DEFAULT_GENERATION
