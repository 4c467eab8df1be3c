"""Covariant differential operators on polynomial fields."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..clifford import gamma_set
from ..mathkit.poly import SpacetimePoly
from .forms import DIM, Form, covariant_codiff, covariant_d, exterior_d, hodge_star, tensor, wedge
from .model import GaugeModel

_ACTS = {"ad": "act_ad", "adjoint": "act_ad", "W": "act_W", "higgs": "act_W", "V": "act_V", "spinor": "act_V"}


def _act(model: GaugeModel, rep: str):
    try:
        return getattr(model, _ACTS[rep])
    except KeyError:
        raise ValueError(f"unknown representation {rep!r}") from None


def _form(x) -> Form:
    return x if isinstance(x, Form) else Form(x, 0)


def _check_values(model: GaugeModel, rep: str, f: Form):
    expected = {"act_ad": (model.n,), "act_W": (model.dw,), "act_V": (DIM, model.d)}[_ACTS[rep]]
    if f.value_shape != expected:
        raise ValueError(f"value shape {f.value_shape} does not match the {rep} action {expected}")


def cov_d(model: GaugeModel, A: Form | None, s, rep: str) -> Form:
    """d_A on forms valued in the adjoint ('ad'), Higgs ('W') or spinor ('V') bundle."""
    s = _form(s)
    _check_values(model, rep, s)
    if s.degree > 3:
        raise ValueError("covariant derivative of a 4-form vanishes identically; degree must be <= 3")
    return covariant_d(A, s, _act(model, rep))


def cov_codiff(model: GaugeModel, A: Form | None, s, rep: str) -> Form:
    s = _form(s)
    _check_values(model, rep, s)
    return covariant_codiff(A, s, _act(model, rep))


def covariant_box(model: GaugeModel, A: Form | None, s, rep: str) -> Form:
    """d_A^* d_A."""
    return cov_codiff(model, A, cov_d(model, A, s, rep), rep)


def curvature(model: GaugeModel, A: Form) -> Form:
    """F_A = dA + 1/2 [A ^ A]."""
    return exterior_d(A) + wedge(A, A, model.act_ad) * 0.5


def apply_rep_form(model: GaugeModel, W: Form, s, rep: str) -> Form:
    """rho_*(W) ^ s for an algebra-valued form W."""
    return wedge(W, _form(s), _act(model, rep))


def clifford_contract(f: Form) -> SpacetimePoly:
    """Sum_a i Gamma^a f_a for a spinor-valued 1-form."""
    if f.degree != 1:
        raise ValueError("Clifford contraction needs a 1-form")
    iG = 1j * gamma_set().upper
    return f.poly.map(lambda c: np.einsum("ast,Nati->Nsi", iG, c, optimize=True))


def dirac_operator(model: GaugeModel, A: Form | None, psi: SpacetimePoly) -> SpacetimePoly:
    """i Gamma^a (d_A psi)_a."""
    return clifford_contract(cov_d(model, A, psi, "V"))


def bullet_form(model: GaugeModel, X: Form, psi) -> SpacetimePoly:
    """Bullet action of an algebra-valued form of degree 0, 1 or 2 on a twisted spinor field."""
    psi = _form(psi)
    if psi.degree != 0:
        raise ValueError("bullet acts on spinor fields (0-forms)")
    if X.degree == 0:
        return tensor(X, psi, model.act_V)
    if X.degree not in (1, 2):
        raise ValueError("bullet is defined for forms of degree 0, 1 and 2")
    M = _bullet_tables(model)[X.degree]
    lead = X.degree + 1
    d4 = M.shape[-1]

    def kern(x, p):
        # contract the form and algebra axes first, then one batched matmul on (spinor x internal)
        Xm = np.tensordot(x, M, axes=(list(range(-lead, 0)), list(range(lead))))
        out = Xm @ p.reshape(p.shape[:-2] + (d4, 1))
        return out.reshape(out.shape[:-2] + p.shape[-2:])
    return tensor(Form(X.poly, 0), psi, kern)


@lru_cache(maxsize=16)
def _bullet_tables(model: GaugeModel) -> dict:
    """Degree -> matrices of (x, psi) -> x . psi on the flattened (spinor, internal) index."""
    G = gamma_set().upper
    imgs = model.spinor_rep.images
    n, d = imgs.shape[0], imgs.shape[1]
    t1 = np.einsum("kst,aij->kasitj", 1j * G, imgs).reshape(DIM, n, 4 * d, 4 * d)
    GG = np.einsum("ist,jtu->ijsu", G, G)
    for i in range(DIM):
        GG[i, i] = 0
    t2 = -np.einsum("ijsu,avw->ijasvuw", GG, imgs).reshape(DIM, DIM, n, 4 * d, 4 * d)
    return {1: t1, 2: t2}


def lichnerowicz_residual(model: GaugeModel, A: Form | None, phi: SpacetimePoly,
                          include_curvature: bool = True) -> SpacetimePoly:
    """D_A(D_A phi) - d_A^* d_A phi - 1/2 F_A . phi (identically zero)."""
    DD = dirac_operator(model, A, dirac_operator(model, A, phi))
    out = DD - covariant_box(model, A, phi, "V").poly
    if include_curvature and A is not None:
        out = out - bullet_form(model, curvature(model, A), phi) * 0.5
    return out


def dirac_current(model: GaugeModel, A: Form | None, phi: SpacetimePoly, psi: SpacetimePoly) -> SpacetimePoly:
    """j^a = Re <phi, i Gamma^a psi>, so that Re<D phi, psi> - Re<phi, D psi> = -d_a j^a.

    Returns the 4-vector of components (contravariant index).
    """
    del A
    J = model.J
    iG = 1j * gamma_set().upper
    return phi.bilinear(psi, lambda p, q: np.einsum("...si,st,atu,...ui->...a", np.conj(p), J, iG, q, optimize=True).real + 0j)


def divergence(v: SpacetimePoly) -> SpacetimePoly:
    return sum((v[a].derive(a) for a in range(1, DIM)), v[0].derive(0))


def hodge(f: Form) -> Form:
    return hodge_star(f)
