"""Bilinear interaction forms and the Yukawa coupling.

Each form is defined weakly by a pairing and returned as its Riesz
representer.  Algebra-valued forms use the Gram matrix of the invariant inner
product; the spinor-valued Yukawa forms solve a small real Gram system of the
Dirac pairing (assembled once per model).

All kernels act on plain arrays with arbitrary leading axes; the ``*_form``
wrappers lift them to polynomial forms.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..clifford import gamma_set
from .forms import DIM, Form, tensor
from .model import GaugeModel, complexify, realify

KINDS = ("YH-L", "YH-R", "YMH", "YMD-0", "YMD-1", "HY")


class SingularGramError(np.linalg.LinAlgError):
    """The pairing is degenerate on the chosen basis."""


class _Riesz:
    """Representer of a real-linear functional on a block of twisted spinors.

    ``src`` and ``tgt`` are (rows, cols) index lists; the real bases are
    {E_e} + {i E_e}.  Functional values are supplied on the source basis.
    """

    def __init__(self, J: np.ndarray, src, tgt, d: int):
        self.src_rows, self.src_cols = (np.array(x) for x in zip(*src))
        self.tgt_rows, self.tgt_cols = (np.array(x) for x in zip(*tgt))
        ns, nt = len(src), len(tgt)
        if ns != nt:
            raise SingularGramError("source and target blocks differ in dimension")
        beta = np.concatenate([np.ones(ns), 1j * np.ones(ns)])
        alpha = np.concatenate([np.ones(nt), 1j * np.ones(nt)])
        sr, sc = np.tile(self.src_rows, 2), np.tile(self.src_cols, 2)
        tr, tc = np.tile(self.tgt_rows, 2), np.tile(self.tgt_cols, 2)
        # M[j, i] = Re <T_i, S_j>
        M = np.real(np.conj(alpha)[None, :] * beta[:, None] * J[tr[None, :], sr[:, None]]
                    * (tc[None, :] == sc[:, None]))
        if abs(np.linalg.det(M)) < 1e-12:
            raise SingularGramError("Dirac pairing degenerate on the chosen basis")
        self.beta = beta[:ns]
        self.inv_t = np.linalg.inv(M).T
        self.n = nt
        self.d = d

    def solve(self, ell: np.ndarray) -> np.ndarray:
        c = ell @ self.inv_t
        vals = c[..., :self.n] + 1j * c[..., self.n:]
        out = np.zeros(ell.shape[:-1] + (DIM, self.d), complex)
        out[..., self.tgt_rows, self.tgt_cols] = vals
        return out


class Interactions:
    """Pointwise interaction kernels for one model."""

    def __init__(self, model: GaugeModel):
        self.model = model
        self.J = model.J
        self.iGup = 1j * gamma_set().upper
        self.Ginv = model.algebra.gram_inv
        self.rho = model.higgs_rep.images
        self.vrho = model.spinor_rep.images
        self.Y = model.yukawa.coefficients
        self.g = model.yukawa.g_Y
        dl, d = model.layout.dl, model.d
        self.dl = dl
        left_src = [(a, v) for a in (0, 1) for v in range(dl)]
        left_tgt = [(a, v) for a in (2, 3) for v in range(dl)]
        right_src = [(a, v) for a in (2, 3) for v in range(dl, d)]
        right_tgt = [(a, v) for a in (0, 1) for v in range(dl, d)]
        self._left = _Riesz(self.J, left_src, left_tgt, d) if dl else None
        self._right = _Riesz(self.J, right_src, right_tgt, d) if d - dl else None

    # algebra-valued
    def ymh(self, u1, u2):
        """2 Re <u1, rho_*(e_b) u2>, raised with the inverse Gram matrix."""
        p = 2 * np.einsum("...i,bij,...j->...b", np.conj(u1), self.rho, u2, optimize=True).real
        return (p @ self.Ginv).astype(complex)

    def ymd0(self, p1, p2):
        p = np.einsum("...sv,st,bvw,...tw->...b", np.conj(p1), self.J, self.vrho, p2, optimize=True).real
        return (p @ self.Ginv).astype(complex)

    def ymd1(self, p1, p2):
        """1-form with components g^{bb} Re <p1, i Gamma^b rho(e_c) p2>."""
        p = np.einsum("...sv,st,btu,cvw,...uw->...bc", np.conj(p1), self.J, self.iGup, self.vrho, p2, optimize=True).real
        p = p * np.array([-1.0, 1.0, 1.0, 1.0])[:, None]
        return (p @ self.Ginv).astype(complex)

    # Yukawa pieces
    def yukawa(self, pL, U, pR):
        dl = self.dl
        t = np.einsum("...av,ab,...bw,vkw,...k->...", np.conj(pL[..., :dl]), self.J, pR[..., dl:],
                      self.Y, realify(np.asarray(U, complex)), optimize=True)
        return -2 * self.g * t.real

    def hy(self, pL, pR):
        dl = self.dl
        r = self.g * np.einsum("...av,ab,...bw,vkw->...k", np.conj(pL[..., :dl]), self.J, pR[..., dl:], self.Y, optimize=True).real
        return complexify(r)

    def yh_left(self, U, pR):
        """Riesz representer in Delta_R (x) V_L of phi_L -> -1/2 Y(phi_L, U, pR)."""
        if self._left is None:
            return np.zeros(np.broadcast_shapes(np.shape(U)[:-1], np.shape(pR)[:-2]) + (DIM, self.model.d), complex)
        K = np.einsum("ab,...bw,vkw,...k->...av", self.J, pR[..., self.dl:], self.Y, realify(np.asarray(U, complex)), optimize=True)
        Ks = K[..., self._left.src_rows, self._left.src_cols]
        ell = self.g * np.real(np.conj(self._left.beta) * Ks)
        ell = np.concatenate([ell, self.g * np.real(np.conj(1j * self._left.beta) * Ks)], axis=-1)
        return self._left.solve(ell)

    def yh_right(self, pL, U):
        """Riesz representer in Delta_L (x) V_R of phi_R -> -1/2 Y(pL, U, phi_R)."""
        if self._right is None:
            return np.zeros(np.broadcast_shapes(np.shape(U)[:-1], np.shape(pL)[:-2]) + (DIM, self.model.d), complex)
        K = np.einsum("...av,ab,vkw,...k->...bw", np.conj(pL[..., :self.dl]), self.J, self.Y,
                      realify(np.asarray(U, complex)), optimize=True)
        Ks = K[..., self._right.src_rows, self._right.src_cols - self.dl]
        beta = self._right.beta
        ell = np.concatenate([self.g * np.real(beta * Ks), self.g * np.real(1j * beta * Ks)], axis=-1)
        return self._right.solve(ell)

    def kernel(self, kind: str):
        table = {"YH-L": self.yh_left, "YH-R": self.yh_right, "YMH": self.ymh,
                 "YMD-0": self.ymd0, "YMD-1": self.ymd1, "HY": self.hy}
        if kind not in table:
            raise ValueError(f"unknown interaction kind {kind!r}; expected one of {KINDS}")
        return table[kind]


@lru_cache(maxsize=32)
def interactions(model: GaugeModel) -> Interactions:
    return Interactions(model)


def _as_form(x) -> Form:
    return x if isinstance(x, Form) else Form(x, 0)


def interaction_form(model: GaugeModel, kind: str, a, b):
    """Evaluate an interaction form on arrays or lift it to polynomial forms.

    Polynomial arguments may be forms of any degree (their form axes come first
    in the result); YMD-1 of two 0-forms is a 1-form.
    """
    ker = interactions(model).kernel(kind)
    if not isinstance(a, (Form,)) and not hasattr(a, "bilinear"):
        return ker(np.asarray(a), np.asarray(b))
    fa, fb = _as_form(a), _as_form(b)
    poly = tensor(fa, fb, ker)
    extra = 1 if kind == "YMD-1" else 0
    return Form(poly, fa.degree + fb.degree + extra)


def yukawa_coupling(model: GaugeModel, psi_l, Phi, psi_r):
    """-2 g_Y Re <s_L, s_R> Y(tau_L, Phi, tau_R), extended by linearity.

    Works on arrays (leading axes broadcast) or on polynomials.
    """
    I = interactions(model)
    if not hasattr(psi_l, "bilinear"):
        return I.yukawa(np.asarray(psi_l), np.asarray(Phi), np.asarray(psi_r))
    dl = I.dl
    # K[a, v] = sum J[a, b] psi_r[b, w] Y[v, k, w] Phi_k, then contract with conj(psi_l)
    K = Phi.bilinear(psi_r, lambda U, pR: np.einsum("ab,...bw,vkw,...k->...av", I.J, pR[..., dl:], I.Y, realify(U), optimize=True))
    return psi_l.bilinear(K, lambda pL, k: (-2 * I.g * np.einsum("...av,...av->...", np.conj(pL[..., :dl]), k, optimize=True).real)
                          .astype(complex))
