"""Discretized action on the box [-1, 1]^4 and its numerical variations.

This is a deliberately separate implementation of the Lagrangian: it works on
sampled values and first derivatives at tensor Gauss-Legendre nodes, forms
brackets with ambient matrices and never touches the ``Form`` machinery.  It
serves as an oracle for the field equations (first variation along compactly
supported directions) and for the gauge identity (variation along an
infinitesimal gauge orbit).

Variations are exact in the step: S(eps) is a polynomial of degree <= 4 in
eps, so the five point central stencil returns dS/deps(0) up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..clifford import gamma_set
from ..mathkit.poly import DIM, SpacetimePoly
from .model import FieldTriple, GaugeModel, SourceTuple

METRIC = np.array([-1.0, 1.0, 1.0, 1.0])


def bump(power: int = 2) -> SpacetimePoly:
    """prod_mu (1 - x_mu^2)^power; vanishes to order ``power`` on the box faces."""
    out = SpacetimePoly.constant(1.0)
    for mu in range(DIM):
        e = np.zeros(DIM, int)
        one_d = SpacetimePoly.from_terms([(e, 1.0), (2 * np.eye(DIM, dtype=int)[mu], -1.0)])
        for _ in range(power):
            out = out.bilinear(one_d, np.multiply)
    return out


@dataclass
class Sampled:
    """Values and first derivatives of a triple at the nodes (derivative axis first)."""

    psi: np.ndarray
    dpsi: np.ndarray
    A: np.ndarray
    dA: np.ndarray
    Phi: np.ndarray
    dPhi: np.ndarray

    def __add__(self, other: "Sampled") -> "Sampled":
        return Sampled(*(a + b for a, b in zip(self.astuple(), other.astuple())))

    def __mul__(self, t: float) -> "Sampled":
        return Sampled(*(a * t for a in self.astuple()))

    def astuple(self):
        return (self.psi, self.dpsi, self.A, self.dA, self.Phi, self.dPhi)


class ActionOracle:
    """Tensor Gauss-Legendre quadrature of the Lagrangian density on [-1, 1]^4."""

    def __init__(self, model: GaugeModel, nodes: int = 10):
        self.model = model
        x, w = np.polynomial.legendre.leggauss(nodes)
        grid = np.stack(np.meshgrid(x, x, x, x, indexing="ij"), axis=-1).reshape(-1, DIM)
        self.points = grid
        self.weights = np.einsum("i,j,k,l->ijkl", w, w, w, w).ravel()
        self.nodes = nodes

    @cached_property
    def _tables(self):
        m = self.model
        alg = m.algebra
        return {
            "iG": 1j * gamma_set().upper,
            "J": m.J,
            "G": alg.gram,
            "rhoV": m.spinor_rep.images,
            "rhoW": m.higgs_rep.images,
            "maskL": np.pad(np.ones((2, m.layout.dl)), ((0, 2), (0, m.layout.dr))).astype(bool),
            "maskR": np.pad(np.ones((2, m.layout.dr)), ((2, 0), (m.layout.dl, 0))).astype(bool),
        }

    def sample(self, fields: FieldTriple) -> Sampled:
        p = self.points
        return Sampled(fields.psi(p), fields.psi.gradient()(p), fields.A.poly(p), fields.A.poly.gradient()(p),
                       fields.Phi(p), fields.Phi.gradient()(p))

    @cached_property
    def _weight(self):
        """Bump values, gradient and Hessian at the nodes."""
        b = bump()
        g = b.gradient()
        return b(self.points).real, g(self.points).real, g.gradient()(self.points).real

    def _localize(self, q: SpacetimePoly):
        """Values, gradient and Hessian of bump * q (product rule, no polynomial expansion)."""
        p = self.points
        b, db, ddb = self._weight
        g = q.gradient()
        v, dv, ddv = q(p), g(p), g.gradient()(p)
        ex = (slice(None),) + (None,) * len(q.vshape)
        val = b[ex] * v
        grad = db[(...,) + (None,) * len(q.vshape)] * v[:, None] + b[ex][:, None] * dv
        hess = (ddb[(...,) + (None,) * len(q.vshape)] * v[:, None, None]
                + db[:, :, None][(...,) + (None,) * len(q.vshape)] * dv[:, None]
                + db[:, None, :][(...,) + (None,) * len(q.vshape)] * dv[:, :, None]
                + b[ex][:, None, None] * ddv)
        return val, grad, hess

    def sample_localized(self, direction: FieldTriple) -> Sampled:
        """Sampled bump * direction, vanishing with its first derivatives on the box faces."""
        psi, dpsi, _ = self._localize(direction.psi)
        A, dA, _ = self._localize(direction.A.poly)
        Phi, dPhi, _ = self._localize(direction.Phi)
        return Sampled(psi, dpsi, A, dA, Phi, dPhi)

    # pointwise densities
    def _bracket(self, x, y):
        alg = self.model.algebra
        X, Y = alg.matrix(x), alg.matrix(y)
        return alg.coords(X @ Y - Y @ X, check=False).real

    def densities(self, s: Sampled) -> dict:
        t = self._tables
        A = s.A.real
        # spinors: D_mu psi = d_mu psi + rho(A_mu) psi
        rV = np.einsum("nma,aij->nmij", A, t["rhoV"])
        Dpsi = s.dpsi + np.einsum("nmij,nsj->nmsi", rV, s.psi)
        L_D = 0.0
        for mask in (t["maskL"], t["maskR"]):
            p = np.where(mask, s.psi, 0)
            Dp = np.where(mask, Dpsi, 0)
            slashed = np.einsum("mst,nmti->nsi", t["iG"], Dp)
            L_D = L_D + np.einsum("nsi,st,nti->n", np.conj(p), t["J"], slashed).real

        # Yukawa: -2 g Re sum conj(pL) J pR Y(tau_L, Phi, tau_R)
        m = self.model
        dl = m.layout.dl
        pL = np.where(t["maskL"], s.psi, 0)[..., :dl]
        pR = np.where(t["maskR"], s.psi, 0)[..., dl:]
        realPhi = np.concatenate([s.Phi.real, s.Phi.imag], axis=-1)
        L_Y = -2 * m.yukawa.g_Y * np.einsum("nav,ab,nbw,vkw,nk->n", np.conj(pL), t["J"], pR,
                                            m.yukawa.coefficients, realPhi).real

        # curvature F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]
        dA = s.dA.real
        F = dA - np.swapaxes(dA, 1, 2)
        F = F + self._bracket(A[:, :, None, :], A[:, None, :, :])
        gg = METRIC[:, None] * METRIC[None, :]
        L_YM = -0.25 * np.einsum("nmva,ab,nmvb,mv->n", F, t["G"], F, gg)

        rW = np.einsum("nma,aij->nmij", A, t["rhoW"])
        DPhi = s.dPhi + np.einsum("nmij,nj->nmi", rW, s.Phi)
        kin = np.einsum("nmi,nmi,m->n", np.conj(DPhi), DPhi, METRIC).real
        u = np.einsum("ni,ni->n", np.conj(s.Phi), s.Phi).real
        L_H = kin - (0.5 * u * u - u)
        return {"D": L_D, "Y": L_Y, "YM": L_YM, "H": L_H}

    def lagrangian(self, s: Sampled) -> np.ndarray:
        d = self.densities(s)
        return d["D"] + d["Y"] + d["YM"] + d["H"]

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)

    def action(self, fields: FieldTriple) -> float:
        return self.integrate(self.lagrangian(self.sample(fields)))

    def variation(self, fields: FieldTriple, direction: FieldTriple | Sampled, step: float = 1e-2) -> float:
        """dS/deps at eps = 0 along fields + eps * direction (five point stencil).

        A ``FieldTriple`` direction is multiplied by the bump first.
        """
        base = self.sample(fields)
        dirn = direction if isinstance(direction, Sampled) else self.sample_localized(direction)
        S = {k: self.integrate(self.lagrangian(base + dirn * (k * step))) for k in (-2, -1, 1, 2)}
        return (S[-2] - 8 * S[-1] + 8 * S[1] - S[2]) / (12 * step)

    # pairings of a direction with equation residuals
    def residual_pairing(self, direction: FieldTriple | Sampled, res: SourceTuple) -> float:
        """Integral of 2Re<dpsi_L, K_L> + 2Re<dpsi_R, K_R> - <dA, J> + 2Re<dPhi, F>.

        For res = el_residual(fields) this is the first variation of the action.
        """
        t = self._tables
        p = self.points
        dirn = direction if isinstance(direction, Sampled) else self.sample_localized(direction)
        val = 0.0
        for mask, K in ((t["maskL"], res.K_L(p)), (t["maskR"], res.K_R(p))):
            val = val + 2 * np.einsum("nsi,st,nti->n", np.conj(np.where(mask, dirn.psi, 0)), t["J"], K).real
        val = val - np.einsum("nma,ab,nmb,m->n", dirn.A.real, t["G"], res.J(p).real, METRIC)
        val = val + 2 * np.einsum("ni,ni->n", np.conj(dirn.Phi), res.F(p)).real
        return self.integrate(val)

    def gauge_direction(self, fields: FieldTriple, eta: SpacetimePoly) -> Sampled:
        """Tangent of t -> fields . exp(t xi) with xi = bump * eta, sampled at the nodes.

        (dpsi, dA, dPhi) = (-rho(xi) psi, d xi + [A, xi], -rho(xi) Phi).
        """
        m = self.model
        rV, rW = m.spinor_rep.images, m.higgs_rep.images
        s = self.sample(fields)
        xi, dxi, ddxi = (x.real for x in self._localize(eta))
        A, dA = s.A.real, s.dA.real
        psi = -np.einsum("na,aij,nsj->nsi", xi, rV, s.psi)
        dpsi = -(np.einsum("nva,aij,nsj->nvsi", dxi, rV, s.psi) + np.einsum("na,aij,nvsj->nvsi", xi, rV, s.dpsi))
        Phi = -np.einsum("na,aij,nj->ni", xi, rW, s.Phi)
        dPhi = -(np.einsum("nva,aij,nj->nvi", dxi, rW, s.Phi) + np.einsum("na,aij,nvj->nvi", xi, rW, s.dPhi))
        dirA = dxi + self._bracket(A, xi[:, None, :])
        ddirA = ddxi + self._bracket(dA, xi[:, None, None, :]) + self._bracket(A[:, None], dxi[:, :, None, :])
        return Sampled(psi, dpsi, dirA, ddirA, Phi, dPhi)

    def gauge_variation(self, fields: FieldTriple, eta: SpacetimePoly, step: float = 1e-2) -> float:
        """dS/dt along the infinitesimal gauge orbit generated by bump * eta (vanishes)."""
        return self.variation(fields, self.gauge_direction(fields, eta), step)

    def algebra_pairing(self, eta: SpacetimePoly, C: SpacetimePoly) -> float:
        """Integral of <bump * eta, C> in the invariant inner product."""
        p = self.points
        xi = self._localize(eta)[0].real
        return self.integrate(np.einsum("na,ab,nb->n", xi, self.model.algebra.gram, C(p).real))


__all__ = ["ActionOracle", "Sampled", "bump"]
