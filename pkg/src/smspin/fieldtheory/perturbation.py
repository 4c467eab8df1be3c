"""Perturbation operators and the multi-fold linearized sources.

A perturbation (phi, W, Upsilon) of a background (psi, A, Phi) is stored in a
``FieldTriple`` (psi slot = phi, A slot = W, Phi slot = Upsilon).

``nonlinear_terms`` gives the principal nonlinear right hand sides N^DL,
N^DR, N^YM, N^H of the perturbation system; ``linearized_sources`` gives
their one-, two- and three-fold linearizations.  Both use the plain
exterior derivative: terms without derivatives of the perturbation are
dropped.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from ..clifford import gamma_set
from ..mathkit.poly import SpacetimePoly
from .forms import DIM, Form, codifferential, exterior_d, interior, wedge
from .interactions import interaction_form, interactions
from .model import FieldTriple, GaugeModel
from .operators import bullet_form, cov_codiff, cov_d, curvature

TAGS = ("N", "M1", "M2", "M3", "O1", "O2", "O3", "P", "Q", "R_L", "R_R", "T1", "T2", "T3")
CHANNELS = ("DL", "DR", "YM", "H")


class MissingFieldError(KeyError):
    """A lower-order linearized field needed at this level was not supplied."""


def _f0(p: SpacetimePoly) -> Form:
    return Form(p, 0)


def _lie(a: Form, b: Form, model: GaugeModel) -> Form:
    return wedge(a, b, model.act_ad)


def _star_wedge_star(W: Form, X: Form, act) -> Form:
    """*(W ^ *X) = -i_W X for a 1-form W."""
    return -interior(W, X, act)


def _rho(W: Form, s: SpacetimePoly, act) -> Form:
    """rho_*(W) s as a 1-form."""
    return wedge(W, _f0(s), act)


def _re_inner(a: SpacetimePoly, b: SpacetimePoly) -> SpacetimePoly:
    return a.bilinear(b, lambda x, y: np.einsum("...i,...i->...", np.conj(x), y).real + 0j)


def _scale(c: SpacetimePoly, v: SpacetimePoly) -> SpacetimePoly:
    """Scalar field times vector field."""
    return c.bilinear(v, lambda x, y: x[..., None] * y)


def _ymh(model, a, b) -> Form:
    return interaction_form(model, "YMH", a, b)


def _ymd(model, a, b) -> Form:
    return interaction_form(model, "YMD-1", a, b)


def _yh_l(model, U, pR) -> SpacetimePoly:
    return interaction_form(model, "YH-L", U, pR).poly


def _yh_r(model, pL, U) -> SpacetimePoly:
    return interaction_form(model, "YH-R", pL, U).poly


def yh_gradient_left(model: GaugeModel, Ups: SpacetimePoly, phi_r: SpacetimePoly) -> SpacetimePoly:
    """sum_a I_YH,L(d Ups(e_a), i Gamma^a phi_R)."""
    I = interactions(model)
    iG = 1j * gamma_set().upper

    def ker(g, p):
        out = 0
        for a in range(DIM):
            out = out + I.yh_left(g[..., a, :], np.einsum("st,...ti->...si", iG[a], p))
        return out
    return Ups.gradient().bilinear(phi_r, ker)


def yh_gradient_right(model: GaugeModel, phi_l: SpacetimePoly, Ups: SpacetimePoly) -> SpacetimePoly:
    """sum_a I_YH,R(i Gamma^a phi_L, d Ups(e_a))."""
    I = interactions(model)
    iG = 1j * gamma_set().upper

    def ker(p, g):
        out = 0
        for a in range(DIM):
            out = out + I.yh_right(np.einsum("st,...ti->...si", iG[a], p), g[..., a, :])
        return out
    return phi_l.bilinear(Ups.gradient(), ker)


# named operators
def perturbation_operator(model: GaugeModel, tag: str, background: FieldTriple, pert: FieldTriple,
                          sector: str | None = None):
    """Evaluate one of the shorthand operators on polynomial fields.

    ``background`` carries (psi, A, Phi), ``pert`` carries (phi, W, Upsilon).
    For the T operators ``sector`` selects the chiral part of psi and phi
    ('L', 'R' or None for the whole + sector).
    """
    if tag not in TAGS:
        raise ValueError(f"unknown perturbation operator {tag!r}; expected one of {TAGS}")
    A, Phi = background.A, background.Phi
    W, Ups = pert.A, pert.Phi
    psiL, psiR = background.left(model), background.right(model)
    phiL, phiR = pert.left(model), pert.right(model)
    aW, aV = model.act_W, model.act_V

    if tag == "N":
        WW = _lie(W, W, model)
        out = _star_wedge_star(W, curvature(model, A), model.act_ad)
        out = out + cov_codiff(model, A, WW, "ad") * 0.5
        out = out + _star_wedge_star(W, cov_d(model, A, W, "ad"), model.act_ad)
        return out + _star_wedge_star(W, WW, model.act_ad) * 0.5
    if tag == "M1":
        return (_ymh(model, cov_d(model, A, Ups, "W"), Phi) + _ymh(model, cov_d(model, A, Phi, "W"), Ups)
                + _ymh(model, _rho(W, Phi, aW), Phi))
    if tag == "M2":
        return (_ymh(model, cov_d(model, A, Ups, "W"), Ups) + _ymh(model, _rho(W, Ups, aW), Phi)
                + _ymh(model, _rho(W, Phi, aW), Ups))
    if tag == "M3":
        return _ymh(model, _rho(W, Ups, aW), Ups)
    if tag == "P":
        return (_ymd(model, psiL, phiL) + _ymd(model, phiL, psiL) + _ymd(model, phiL, phiL)
                + _ymd(model, psiR, phiR) + _ymd(model, phiR, psiR) + _ymd(model, phiR, phiR))
    if tag == "O1":
        out = cov_codiff(model, A, _rho(W, Phi, aW), "W").poly
        out = out + _star_wedge_star(W, cov_d(model, A, Phi, "W"), aW).poly
        return out + _scale(_re_inner(Phi, Ups), Phi) * 2 + _scale(_re_inner(Phi, Phi), Ups)
    if tag == "O2":
        out = _star_wedge_star(W, _rho(W, Phi, aW), aW).poly
        out = out + cov_codiff(model, A, _rho(W, Ups, aW), "W").poly
        out = out + _star_wedge_star(W, cov_d(model, A, Ups, "W"), aW).poly
        return out + _scale(_re_inner(Phi, Ups), Ups) * 2 + _scale(_re_inner(Ups, Ups), Phi)
    if tag == "O3":
        return _star_wedge_star(W, _rho(W, Ups, aW), aW).poly + _scale(_re_inner(Ups, Ups), Ups)
    if tag == "Q":
        return (interaction_form(model, "HY", psiL, phiR) + interaction_form(model, "HY", phiL, psiR)
                + interaction_form(model, "HY", phiL, phiR)).poly
    if tag == "R_L":
        return _yh_l(model, Ups, phiR) + _yh_l(model, Phi, phiR) + _yh_l(model, Ups, psiR)
    if tag == "R_R":
        return _yh_r(model, phiL, Ups) + _yh_r(model, phiL, Phi) + _yh_r(model, psiL, Ups)

    # T operators
    pick = {"L": lambda f: f.left(model), "R": lambda f: f.right(model), None: lambda f: f.psi}[sector]
    psi, phi = pick(background), pick(pert)
    WW = _lie(W, W, model)
    if tag == "T1":
        return (bullet_form(model, curvature(model, A), phi) * 0.5
                + _star_wedge_star(W, cov_d(model, A, psi, "V"), aV).poly * 2)
    if tag == "T2":
        return (bullet_form(model, cov_d(model, A, W, "ad"), phi) * 0.5
                + _star_wedge_star(W, cov_d(model, A, phi, "V"), aV).poly * 2
                + _star_wedge_star(W, _rho(W, psi, aV), aV).poly
                + bullet_form(model, WW, psi) * 0.25)
    return _star_wedge_star(W, _rho(W, phi, aV), aV).poly + bullet_form(model, WW, phi) * 0.25


def potential_terms(model: GaugeModel, background: FieldTriple, pert: FieldTriple) -> SpacetimePoly:
    """The Higgs potential pieces of O1 + O2 + O3 (the polynomial terms in Phi and Upsilon)."""
    Phi, Ups = background.Phi, pert.Phi
    pu = _re_inner(Phi, Ups)
    return (_scale(pu, Phi) * 2 + _scale(_re_inner(Phi, Phi), Ups) + _scale(pu, Ups) * 2
            + _scale(_re_inner(Ups, Ups), Phi) + _scale(_re_inner(Ups, Ups), Ups))


# nonlinear principal terms
def nonlinear_terms(model: GaugeModel, pert: FieldTriple) -> dict:
    """N^DL, N^DR, N^YM, N^H of the principal perturbation system."""
    W, Ups = pert.A, pert.Phi
    phiL, phiR = pert.left(model), pert.right(model)
    aV, aW = model.act_V, model.act_W
    dW = exterior_d(W)
    WW = _lie(W, W, model)

    def dirac(phi, own_coupling, cubic):
        minus = (bullet_form(model, dW, phi) * 0.5
                 + _star_wedge_star(W, exterior_d(_f0(phi)), aV).poly * 2
                 + _star_wedge_star(W, _rho(W, phi, aV), aV).poly
                 + bullet_form(model, WW, phi) * 0.25
                 - own_coupling - cubic)
        return -minus

    cubic_L = _yh_l(model, Ups, _yh_r(model, phiL, Ups)) + bullet_form(model, W, _yh_l(model, Ups, phiR))
    cubic_R = _yh_r(model, _yh_l(model, Ups, phiR), Ups) + bullet_form(model, W, _yh_r(model, phiL, Ups))
    N_DL = dirac(phiL, yh_gradient_left(model, Ups, phiR), cubic_L)
    N_DR = dirac(phiR, yh_gradient_right(model, phiL, Ups), cubic_R)

    minus_YM = (codifferential(WW) * 0.5 + _star_wedge_star(W, dW, model.act_ad)
                + _star_wedge_star(W, WW, model.act_ad) * 0.5
                + _ymh(model, exterior_d(_f0(Ups)), Ups) + _ymh(model, _rho(W, Ups, aW), Ups))
    minus_H = (_star_wedge_star(W, exterior_d(_f0(Ups)), aW).poly * 2
               + _star_wedge_star(W, _rho(W, Ups, aW), aW).poly + _scale(_re_inner(Ups, Ups), Ups))
    return {"DL": N_DL, "DR": N_DR, "YM": -minus_YM, "H": -minus_H}


# linearized sources
@dataclass
class LinearizedFields:
    """X_(j) for j = 1, 2, 3 and X_(jk) for j < k (each a perturbation triple)."""

    first: dict = field(default_factory=dict)
    second: dict = field(default_factory=dict)

    def one(self, j: int) -> FieldTriple:
        try:
            return self.first[j]
        except KeyError:
            raise MissingFieldError(f"one-fold field X_({j}) not supplied") from None

    def two(self, j: int, k: int) -> FieldTriple:
        key = (min(j, k), max(j, k))
        try:
            return self.second[key]
        except KeyError:
            raise MissingFieldError(f"two-fold field X_{key} not supplied") from None


def one_fold_coupling(model: GaugeModel, background: FieldTriple, X: FieldTriple) -> dict:
    """First order coupling terms of the linearized system (left hand side, besides the wave operator)."""
    psiL, psiR = background.left(model), background.right(model)
    dW = exterior_d(X.A)
    return {
        "DL": bullet_form(model, dW, psiL) * 0.5 - yh_gradient_left(model, X.Phi, psiR),
        "DR": bullet_form(model, dW, psiR) * 0.5 - yh_gradient_right(model, psiL, X.Phi),
        "YM": _ymh(model, exterior_d(_f0(X.Phi)), background.Phi),
        "H": SpacetimePoly.zero((model.dw,)),
    }


def _B(model: GaugeModel, X: FieldTriple, Y: FieldTriple) -> dict:
    """Quadratic part of -N as a (non-symmetric) bilinear map, first slot X."""
    aV, aW = model.act_V, model.act_W
    WX, WY = X.A, Y.A
    dWX = exterior_d(WX)

    def dirac(phiY, coupling):
        return (_star_wedge_star(WX, exterior_d(_f0(phiY)), aV).poly * 2
                + bullet_form(model, dWX, phiY) * 0.5 - coupling)

    return {
        "DL": dirac(Y.left(model), yh_gradient_left(model, X.Phi, Y.right(model))),
        "DR": dirac(Y.right(model), yh_gradient_right(model, Y.left(model), X.Phi)),
        "YM": (codifferential(_lie(WX, WY, model)) * 0.5 + _star_wedge_star(WX, exterior_d(WY), model.act_ad)
               + _ymh(model, exterior_d(_f0(X.Phi)), Y.Phi)),
        "H": _star_wedge_star(WX, exterior_d(_f0(Y.Phi)), aW).poly * 2,
    }


def _T(model: GaugeModel, X: FieldTriple, Y: FieldTriple, Z: FieldTriple, printed_factor: bool = False) -> dict:
    """Cubic part of -N as a trilinear map."""
    aV, aW = model.act_V, model.act_W
    W1, W2 = X.A, Y.A
    U1, U2, U3 = X.Phi, Y.Phi, Z.Phi
    W12 = _lie(W1, W2, model)

    def dirac(phi3, cubic):
        return (_star_wedge_star(W1, _rho(W2, phi3, aV), aV).poly + bullet_form(model, W12, phi3) * 0.25 - cubic)

    cubic_L = _yh_l(model, U1, _yh_r(model, Y.left(model), U3)) + bullet_form(model, W1, _yh_l(model, U2, Z.right(model)))
    cubic_R = _yh_r(model, _yh_l(model, U1, Y.right(model)), U3) + bullet_form(model, W1, _yh_r(model, Z.left(model), U2))
    ym_cubic = _star_wedge_star(W1, _lie(W2, Z.A, model), model.act_ad) * (1.0 if printed_factor else 0.5)
    return {
        "DL": dirac(Z.left(model), cubic_L),
        "DR": dirac(Z.right(model), cubic_R),
        "YM": ym_cubic + _ymh(model, _rho(W1, U2, aW), U3),
        "H": _star_wedge_star(W1, _rho(W2, U3, aW), aW).poly + _scale(_re_inner(U1, U2), U3),
    }


def _add(a: dict, b: dict, s: float = 1.0) -> dict:
    return {k: a[k] + b[k] * s for k in a}


def linearized_sources(model: GaugeModel, level: int, background: FieldTriple, fields: LinearizedFields,
                       index: tuple | None = None, printed_factor: bool = False) -> dict:
    """Per-channel sources of the ``level``-fold linearized system.

    level 1: the first order coupling terms of X_(j) (j = index[0]); the
    nonlinear sources vanish at this order.  level 2: N_(jk) for
    index = (j, k).  level 3: N_(123) with the permutation sums.
    ``printed_factor`` reproduces the cubic Yang-Mills coefficient exactly as
    printed (twice the value consistent with the nonlinear term).
    """
    if level == 1:
        (j,) = index or (1,)
        return one_fold_coupling(model, background, fields.one(j))
    if level == 2:
        j, k = index or (1, 2)
        Xj, Xk = fields.one(j), fields.one(k)
        minus = _add(_B(model, Xj, Xk), _B(model, Xk, Xj))
        return {c: -v for c, v in minus.items()}
    if level == 3:
        X = {j: fields.one(j) for j in (1, 2, 3)}
        pair = {(a, b): fields.two(a, b) for a, b in ((1, 2), (1, 3), (2, 3))}
        total = None
        for p in permutations((1, 2, 3)):
            a, b, c = p
            X_ab = pair[tuple(sorted((a, b)))]
            X_bc = pair[tuple(sorted((b, c)))]
            term = _add(_B(model, X_ab, X[c]), _B(model, X[a], X_bc))
            term = {k: v * 0.5 for k, v in term.items()}
            term = _add(term, _T(model, X[a], X[b], X[c], printed_factor))
            total = term if total is None else _add(total, term)
        return {c: -v for c, v in total.items()}
    raise ValueError("level must be 1, 2 or 3")


# epsilon-extraction oracle
def _family(fields: LinearizedFields, eps) -> FieldTriple:
    """X(eps) = sum_j eps_j X_(j) + sum_{j<k} eps_j eps_k X_(jk)."""
    out = None
    for j, X in fields.first.items():
        term = X.scaled(eps[j - 1])
        out = term if out is None else out + term
    for (j, k), X in fields.second.items():
        out = out + X.scaled(eps[j - 1] * eps[k - 1])
    return out


def _as_poly(x):
    return x.poly if isinstance(x, Form) else x


def epsilon_extraction(model: GaugeModel, fields: LinearizedFields, points, monomials) -> dict:
    """Coefficients of prod eps_j^m_j in N(X(eps)) at ``points``, for each m in ``monomials``.

    N is cubic and X(eps) has degree <= 1 in each eps_j, so N(X(eps)) has
    degree <= 3 in each variable: sampling on a 4 x 4 x 4 grid and solving the
    tensor Vandermonde system recovers every coefficient exactly.
    Returns {monomial: {channel: values}}.
    """
    nodes = np.array([-1.0, -0.5, 0.5, 1.0])
    Vinv = np.linalg.inv(np.vander(nodes, 4, increasing=True))
    samples = {c: [] for c in CHANNELS}
    for e1 in nodes:
        for e2 in nodes:
            for e3 in nodes:
                N = nonlinear_terms(model, _family(fields, (e1, e2, e3)))
                for c in CHANNELS:
                    samples[c].append(_as_poly(N[c])(points))
    grids = {c: np.array(v).reshape((4, 4, 4) + np.shape(v[0])) for c, v in samples.items()}
    out = {}
    for m in monomials:
        i, j, k = m
        out[tuple(m)] = {c: np.tensordot(Vinv[k], np.tensordot(Vinv[j], np.tensordot(Vinv[i], g, axes=(0, 0)),
                                                               axes=(0, 0)), axes=(0, 0))
                         for c, g in grids.items()}
    return out


def random_linearized_fields(model: GaugeModel, rng: np.random.Generator, degree: int = 2,
                             scale: float = 0.5) -> LinearizedFields:
    first = {j: FieldTriple.random(model, rng, degree, scale) for j in (1, 2, 3)}
    second = {p: FieldTriple.random(model, rng, degree, scale) for p in ((1, 2), (1, 3), (2, 3))}
    return LinearizedFields(first, second)


__all__ = ["TAGS", "CHANNELS", "MissingFieldError", "perturbation_operator", "potential_terms", "nonlinear_terms",
           "LinearizedFields", "one_fold_coupling", "linearized_sources", "epsilon_extraction",
           "random_linearized_fields", "yh_gradient_left", "yh_gradient_right"]
