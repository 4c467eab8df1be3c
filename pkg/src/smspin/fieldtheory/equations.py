"""Lagrangian density, Euler-Lagrange residuals and the compatibility identity.

Densities are returned as scalar polynomials: the coefficient of dvol.
"""
from __future__ import annotations

import numpy as np

from ..mathkit.poly import SpacetimePoly
from .forms import DIM, Form, hodge_star, wedge
from .interactions import interaction_form, yukawa_coupling
from .model import FieldTriple, GaugeModel, SourceTuple
from .operators import cov_codiff, cov_d, curvature, dirac_operator


def potential(u):
    """V(u) = u^2/2 - u, evaluated on |Phi|^2."""
    return 0.5 * u * u - u


def potential_prime(u):
    return u - 1.0


def dirac_pairing(model: GaugeModel, a: SpacetimePoly, b: SpacetimePoly) -> SpacetimePoly:
    """Re <a, b> for twisted spinor fields (Dirac form tensor the Hermitian product)."""
    J = model.J
    return a.bilinear(b, lambda x, y: np.einsum("...si,st,...ti->...", np.conj(x), J, y, optimize=True).real + 0j)


def _norm2(Phi: SpacetimePoly) -> SpacetimePoly:
    return Phi.bilinear(Phi, lambda x, y: np.einsum("...i,...i->...", np.conj(x), y).real + 0j)


def _dvol(f: Form) -> SpacetimePoly:
    return f.poly[0, 1, 2, 3]


def lagrangian_density(model: GaugeModel, fields: FieldTriple) -> dict:
    """The four summands L_D, L_Y, L_YM, L_H as dvol coefficients."""
    fields.check(model, tol=1e-12)
    A = fields.A
    pL, pR = fields.left(model), fields.right(model)
    L_D = dirac_pairing(model, pL, dirac_operator(model, A, pL)) + dirac_pairing(model, pR, dirac_operator(model, A, pR))
    L_Y = yukawa_coupling(model, pL, fields.Phi, pR)

    G = model.algebra.gram
    F = curvature(model, A)
    L_YM = _dvol(wedge(F, hodge_star(F), lambda x, y: np.einsum("...a,ab,...b->...", np.conj(x), G, y).real + 0j)) * -0.5

    dPhi = cov_d(model, A, fields.Phi, "W")
    kin = _dvol(wedge(dPhi, hodge_star(dPhi), lambda x, y: np.einsum("...i,...i->...", np.conj(x), y).real + 0j))
    u = _norm2(fields.Phi)
    V = u.bilinear(u, lambda x, y: 0.5 * x * y) - u
    return {"D": L_D, "Y": L_Y, "YM": L_YM, "H": kin - V}


def total_lagrangian(model: GaugeModel, fields: FieldTriple) -> SpacetimePoly:
    parts = lagrangian_density(model, fields)
    return parts["D"] + parts["Y"] + parts["YM"] + parts["H"]


def el_residual(model: GaugeModel, fields: FieldTriple) -> SourceTuple:
    """Left minus right hand sides of the Dirac, Yang-Mills and Higgs equations."""
    fields.check(model, tol=1e-12)
    A, Phi = fields.A, fields.Phi
    pL, pR = fields.left(model), fields.right(model)

    res_L = dirac_operator(model, A, pL) - interaction_form(model, "YH-L", Phi, pR).poly
    res_R = dirac_operator(model, A, pR) - interaction_form(model, "YH-R", pL, Phi).poly

    F = curvature(model, A)
    dPhi = cov_d(model, A, Phi, "W")
    res_YM = (cov_codiff(model, A, F, "ad")
              - interaction_form(model, "YMH", dPhi, Phi)
              - interaction_form(model, "YMD-1", pL, pL)
              - interaction_form(model, "YMD-1", pR, pR))

    u = _norm2(Phi)
    box = cov_codiff(model, A, dPhi, "W").poly
    pot = u.bilinear(Phi, lambda x, y: x[..., None] * y) - Phi  # V'(|Phi|^2) Phi
    res_H = box - pot - interaction_form(model, "HY", pL, pR).poly
    return SourceTuple(res_L, res_R, res_YM, res_H, meta={"kind": "el_residual"})


def compatibility_residual(model: GaugeModel, fields: FieldTriple, sources: SourceTuple) -> SpacetimePoly:
    """D_V^* J + I_YMH(F, Psi) + 2 I0_YMD(K_L, phi_L) + 2 I0_YMD(K_R, phi_R)."""
    V, Psi = fields.A, fields.Phi
    pL, pR = fields.left(model), fields.right(model)
    out = cov_codiff(model, V, sources.J, "ad").poly
    out = out + interaction_form(model, "YMH", sources.F, Psi).poly
    out = out + interaction_form(model, "YMD-0", sources.K_L, pL).poly * 2
    out = out + interaction_form(model, "YMD-0", sources.K_R, pR).poly * 2
    return out


def relative_residual(values: np.ndarray, scale: float) -> float:
    """max |values| / max(scale, tiny)."""
    return float(np.max(np.abs(values)) / max(scale, np.finfo(float).tiny)) if np.size(values) else 0.0


def source_scale(model: GaugeModel, fields: FieldTriple, sources: SourceTuple, points) -> float:
    """Size of the individual terms of the compatibility expression, used to normalise it."""
    V, Psi = fields.A, fields.Phi
    pL, pR = fields.left(model), fields.right(model)
    terms = [cov_codiff(model, V, sources.J, "ad").poly,
             interaction_form(model, "YMH", sources.F, Psi).poly,
             interaction_form(model, "YMD-0", sources.K_L, pL).poly * 2,
             interaction_form(model, "YMD-0", sources.K_R, pR).poly * 2]
    return max(float(np.max(np.abs(t(points)))) if t.nterms else 0.0 for t in terms)


__all__ = ["potential", "potential_prime", "dirac_pairing", "lagrangian_density", "total_lagrangian",
           "el_residual", "compatibility_residual", "relative_residual", "source_scale", "DIM"]
