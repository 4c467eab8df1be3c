"""Hatted one-, two- and three-fold interaction symbols in the Dirac channel.

Every formula is written once and evaluated in three arithmetics:

* numbers: floats or exact scalars, geometry from ``build_geometry``;
* r-jets at a fixed rational s (``jet_geometry(s=...)``);
* Laurent jets in s tensored with Taylor jets in r (``jet_geometry()``).

Spinor-valued quantities are (4, d) arrays or jets with that value shape;
``b`` is the internal matrix of the central source element, acting on the
column index.  Volume factors are normalised to one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from ..clifford import gamma_set
from ..mathkit.jets import LaurentTaylorJet
from ..mathkit.scalars import GaussRat, exact_array, to_complex
from .geometry import InteractionGeometry, is_exact, minkowski

PAIRS = ((1, 2), (1, 3), (2, 3))


class LightlikeSumError(ZeroDivisionError):
    """eta_(k) + eta_(l) is lightlike, so the box symbol cannot be inverted."""


# mixed arithmetic helpers: scalars are numbers or scalar jets, spinors arrays or jets
def _jet(x) -> bool:
    return isinstance(x, LaurentTaylorJet)


def smul(x, M: np.ndarray):
    """Scalar times a constant array."""
    if _jet(x):
        return x.map(lambda c: c.reshape(c.shape + (1,) * M.ndim) * M)
    return x * M


def mm(A, B):
    """Matrix product of arrays or jets (either side)."""
    if _jet(A) or _jet(B):
        if not _jet(A):
            return B.map(lambda c: np.matmul(A, c))
        return A @ B
    return A @ B


def internal(psi, b: np.ndarray):
    """b acting on the column (internal) index."""
    bt = np.swapaxes(b, -1, -2)
    if _jet(psi):
        return psi.map(lambda c: np.matmul(c, bt))
    return np.matmul(psi, bt)


def _scale(x, psi):
    """Scalar (number or jet) times a spinor (array or jet)."""
    if _jet(x):
        if _jet(psi):
            return x.bilinear(psi, lambda a, p: a.reshape(a.shape + (1,) * (p.ndim - a.ndim)) * p)
        return smul(x, psi)
    return psi * x if _jet(psi) else x * psi


class Arith:
    """Constants (Clifford matrices, i, 1/2) in the arithmetic of a geometry."""

    def __init__(self, exact: bool):
        self.exact = exact
        gs = gamma_set(exact)
        self.Gup = gs.upper
        self.i = GaussRat(0, 1) if exact else 1j
        self.half = GaussRat(Fraction(1, 2)) if exact else 0.5
        self.one = GaussRat(1) if exact else 1.0

    def slash(self, w):
        """Gamma^a w_a for a covector of scalars."""
        out = None
        for a in range(4):
            term = smul(w[a], self.Gup[a])
            out = term if out is None else out + term
        return out

    def const(self, x):
        """An array in this arithmetic (binary floats convert exactly)."""
        x = np.asarray(x)
        if not self.exact:
            return to_complex(x) if x.dtype == object else x.astype(complex)
        if x.dtype == object:
            return exact_array(x)
        out = np.empty(x.shape, dtype=object)
        for idx, v in np.ndenumerate(x.astype(complex)):
            out[idx] = GaussRat(Fraction(v.real), Fraction(v.imag))
        return out


def _arith(geo: InteractionGeometry) -> Arith:
    return Arith(is_exact(geo.eta[0]) or is_exact(geo.kappa[1]))


@dataclass
class IModel:
    """Ray transforms I_(j) at y: either I_(1) + s I'_(j) (I'_(1) = 0) or given values."""

    I1: np.ndarray
    dI2: np.ndarray | None = None
    dI3: np.ndarray | None = None
    values: dict | None = field(default=None)

    @classmethod
    def linear(cls, I1, dI2, dI3) -> "IModel":
        return cls(np.asarray(I1), np.asarray(dI2), np.asarray(dI3))

    @classmethod
    def explicit(cls, I1, I2, I3) -> "IModel":
        return cls(np.asarray(I1), values={1: np.asarray(I1), 2: np.asarray(I2), 3: np.asarray(I3)})

    def converted(self, ar: "Arith") -> "IModel":
        conv = ar.const
        vals = None if self.values is None else {j: conv(v) for j, v in self.values.items()}
        return IModel(conv(self.I1), None if self.dI2 is None else conv(self.dI2),
                      None if self.dI3 is None else conv(self.dI3), vals)

    def at(self, j: int, s):
        if self.values is not None:
            return self.values[j]
        if j == 1:
            return self.I1
        d = self.dI2 if j == 2 else self.dI3
        return smul(s, d) + self.I1 if _jet(s) else self.I1 + s * d


def eta_parts(geo: InteractionGeometry) -> dict:
    return {j: [geo.kappa[j] * c for c in geo.xi[j]] for j in (1, 2, 3)}


def hat_phi(j: int, geo: InteractionGeometry, b: np.ndarray, I_model: IModel, ar: Arith | None = None):
    """-1/2 Gamma^a omega_(j),a Gamma^b xi_(j),b b I_(j)."""
    ar = ar or _arith(geo)
    M = mm(ar.slash(geo.omega[j]), ar.slash(geo.xi[j]))
    return _scale(-ar.half, mm(M, internal(I_model.at(j, geo.s), b)))


def _box_inverse(w, exact_zero_check: bool):
    q = minkowski(w, w)
    if _jet(q):
        try:
            return q.inverse()
        except ZeroDivisionError as exc:
            raise LightlikeSumError("eta_(kl) is lightlike at leading order") from exc
    if (not q) if exact_zero_check else abs(q) < 1e-14:
        raise LightlikeSumError("eta_(kl) is lightlike")
    return 1 / q


@dataclass
class TwoFold:
    N: object
    phi: object
    eta: list


def two_fold_symbol(k: int, l: int, geo: InteractionGeometry, b: np.ndarray, hat_phis: dict,
                    ar: Arith | None = None, etas: dict | None = None) -> TwoFold:
    """N^D_(kl) in expanded form and phi_(kl) = N^D_(kl) / <eta_(kl), eta_(kl)>."""
    ar = ar or _arith(geo)
    eta = etas or eta_parts(geo)
    om = geo.omega
    bk = internal(hat_phis[k], b)
    bl = internal(hat_phis[l], b)
    two_i = ar.i * 2
    N = (_scale(minkowski(om[k], eta[l]) * two_i, bl)
         + _scale(minkowski(om[l], eta[k]) * two_i, bk)
         + mm(_scale(ar.i, mm(ar.slash(eta[k]), ar.slash(om[k]))), bl)
         + mm(_scale(ar.i, mm(ar.slash(eta[l]), ar.slash(om[l]))), bk))
    ekl = [eta[k][m] + eta[l][m] for m in range(4)]
    phi = _scale(_box_inverse(ekl, ar.exact), N)
    return TwoFold(N, phi, ekl)


@dataclass
class ThreeFold:
    n111: object
    wedge: object
    bullet: object
    phis: dict
    two_fold: dict

    @property
    def total(self):
        return self.n111 + self.wedge + self.bullet


def three_fold_symbol(geo: InteractionGeometry, b: np.ndarray, I_model: IModel, order=None) -> ThreeFold:
    """The three parts of N^D_(123) as explicit sums over S_3.

    ``order`` relabels the internal indices (a permutation of (1, 2, 3)); the
    result is independent of it, which the tests use as a symmetry check.
    """
    ar = _arith(geo)
    b = ar.const(b)
    I_model = I_model.converted(ar)
    eta = eta_parts(geo)
    om = geo.omega
    phis = {j: hat_phi(j, geo, b, I_model, ar) for j in (1, 2, 3)}
    two = {}
    for k, l in PAIRS:
        tf = two_fold_symbol(k, l, geo, b, phis, ar, eta)
        two[(k, l)] = two[(l, k)] = tf
    bb = np.matmul(b, b)
    labels = tuple(order) if order is not None else (1, 2, 3)
    n111 = wedge = bullet = None
    for p in permutations(labels):
        a1, a2, a3 = p
        t1 = _scale(minkowski(om[a1], om[a2]), internal(phis[a3], bb))
        tf = two[(a2, a3)]
        bphi = internal(tf.phi, b)
        t2 = _scale(minkowski(om[a1], tf.eta) * ar.i, bphi)
        t3 = mm(_scale(ar.i * ar.half, mm(ar.slash(eta[a1]), ar.slash(om[a1]))), bphi)
        n111 = t1 if n111 is None else n111 + t1
        wedge = t2 if wedge is None else wedge + t2
        bullet = t3 if bullet is None else bullet + t3
    return ThreeFold(n111, wedge, bullet, phis, {kl: two[kl] for kl in PAIRS})


def display_blocks(b: np.ndarray, I1, dI2, dI3, exact: bool = True) -> dict:
    """The two blocks predicted for -4/(3 s^2 r) N^D_(123) as s, r -> 0.

    'pole': b^3 (G^0 - G^1)(G^2 I1 + G^1 (I2' - I3')), the coefficient of 1/r;
    'finite': b^3 I1 - 1/2 b^3 (G^0 + G^1) G^2 (I2' - I3').
    """
    ar = Arith(exact)
    G = ar.Gup
    b3 = np.matmul(np.matmul(b, b), b)
    dI = dI2 - dI3
    pole = internal((G[0] - G[1]) @ (G[2] @ I1 + G[1] @ dI), b3)
    finite = internal(I1, b3) - internal(((G[0] + G[1]) @ G[2]) @ dI, b3) * ar.half
    return {"pole": pole, "finite": finite}


__all__ = ["IModel", "TwoFold", "ThreeFold", "LightlikeSumError", "Arith", "hat_phi", "two_fold_symbol",
           "three_fold_symbol", "display_blocks", "eta_parts", "smul", "mm", "internal", "PAIRS"]
