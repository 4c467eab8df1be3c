"""Gauge models, Yukawa forms and the field containers.

A ``GaugeModel`` bundles the Lie algebra, the fermion representation (with its
V_L + V_R splitting), the Higgs representation and a Yukawa form.  Fields are
polynomials: the twisted spinor psi has value shape (4, d), the connection is a
1-form with algebra coordinates as values, and the Higgs field has value shape
(dim W,).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from ..clifford import SectorLayout, dirac_matrix
from ..liealg import (LieAlgebra, Representation, direct_sum, direct_sum_reps, fundamental_rep,
                      hypercharge_rep, outer_tensor, su, trivial_rep, u1)
from ..mathkit.poly import DIM, SpacetimePoly
from .forms import Form


def realify(w: np.ndarray) -> np.ndarray:
    """C^n -> R^2n, (Re, Im) stacked along the last axis."""
    return np.concatenate([w.real, w.imag], axis=-1)


def complexify(v: np.ndarray) -> np.ndarray:
    n = v.shape[-1] // 2
    return v[..., :n] + 1j * v[..., n:]


def realified_matrix(M: np.ndarray) -> np.ndarray:
    """Real 2n x 2n matrix of w -> M w acting on realify(w)."""
    re, im = M.real, M.imag
    top = np.concatenate([re, -im], axis=-1)
    bot = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bot], axis=-2)


@dataclass(frozen=True, eq=False)
class YukawaForm:
    """Y(tau_L, w, tau_R) = sum conj(tau_L[v]) Y[v, k, u] realify(w)[k] tau_R[u].

    Complex antilinear in V_L, real linear in W, complex linear in V_R.  The
    full coupling on twisted spinors is -2 g_Y Re(<s_L, s_R> Y(...)).
    """

    coefficients: np.ndarray          # (dim V_L, 2 dim W, dim V_R)
    g_Y: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=complex))
        if self.coefficients.ndim != 3:
            raise ValueError("Yukawa coefficients need three indices (V_L, real W, V_R)")

    @property
    def shape(self) -> tuple:
        return self.coefficients.shape

    def internal(self, tau_l, w, tau_r):
        """The internal trilinear form Y alone."""
        return np.einsum("...v,vku,...k,...u->...", np.conj(tau_l), self.coefficients, realify(np.asarray(w)), tau_r, optimize=True)

    def invariance_residual(self, model: "GaugeModel", rng: np.random.Generator, samples: int = 4) -> float:
        """max |Y(X tau_L, w, tau_R) + Y(tau_L, X w, tau_R) + Y(tau_L, w, X tau_R)| over random data."""
        dl = model.layout.dl
        worst = 0.0
        for _ in range(samples):
            x = rng.normal(size=model.algebra.dim)
            XV = model.spinor_rep.of(x)
            XW = model.higgs_rep.of(x)
            tl = rng.normal(size=dl) + 1j * rng.normal(size=dl)
            tr = rng.normal(size=model.layout.dr) + 1j * rng.normal(size=model.layout.dr)
            w = rng.normal(size=model.dw) + 1j * rng.normal(size=model.dw)
            s = (self.internal(XV[:dl, :dl] @ tl, w, tr) + self.internal(tl, XW @ w, tr)
                 + self.internal(tl, w, XV[dl:, dl:] @ tr))
            worst = max(worst, abs(s))
        return worst


def invariant_yukawa_basis(algebra: LieAlgebra, spinor_rep: Representation, higgs_rep: Representation,
                           rtol: float = 1e-10) -> np.ndarray:
    """Complex basis (k, dl, 2dw, dr) of the G-invariant Yukawa coefficient arrays."""
    if spinor_rep.split is None:
        raise ValueError("fermion representation needs a V_L + V_R split")
    dl, dr = spinor_rep.split
    dw = higgs_rep.dim
    shape = (dl, 2 * dw, dr)
    n = int(np.prod(shape))
    basis = np.eye(n, dtype=complex).reshape((n,) + shape)
    blocks = []
    for a in range(algebra.dim):
        XV = spinor_rep.images[a]
        XL, XR = XV[:dl, :dl], XV[dl:, dl:]
        Xr = realified_matrix(higgs_rep.images[a])
        t1 = np.einsum("vn,Nvku->Nnku", np.conj(XL), basis, optimize=True)
        t2 = np.einsum("Nvku,km->Nvmu", basis, Xr, optimize=True)
        t3 = np.einsum("Nvkw,wu->Nvku", basis, XR, optimize=True)
        blocks.append((t1 + t2 + t3).reshape(n, -1))
    M = np.concatenate(blocks, axis=1).T if blocks else np.zeros((0, n))
    if M.shape[0] == 0:
        return basis
    _, sv, vh = np.linalg.svd(M)
    tol = rtol * max(1.0, sv[0] if sv.size else 1.0)
    rank = int(np.sum(sv > tol))
    null = vh[rank:].conj()
    return null.reshape((-1,) + shape)


@dataclass(frozen=True, eq=False)
class GaugeModel:
    algebra: LieAlgebra
    spinor_rep: Representation
    higgs_rep: Representation
    yukawa: YukawaForm
    name: str = "model"

    def __post_init__(self):
        if self.spinor_rep.split is None:
            raise ValueError("fermion representation needs a V_L + V_R split")
        if self.spinor_rep.algebra.dim != self.algebra.dim or self.higgs_rep.algebra.dim != self.algebra.dim:
            raise ValueError("representations act on a different algebra")
        dl, dr = self.spinor_rep.split
        if self.yukawa.shape != (dl, 2 * self.higgs_rep.dim, dr):
            raise ValueError(f"Yukawa shape {self.yukawa.shape} does not match ({dl}, {2 * self.higgs_rep.dim}, {dr})")

    @property
    def n(self) -> int:
        return self.algebra.dim

    @property
    def d(self) -> int:
        return self.spinor_rep.dim

    @property
    def dw(self) -> int:
        return self.higgs_rep.dim

    @cached_property
    def layout(self) -> SectorLayout:
        return SectorLayout(*self.spinor_rep.split)

    @cached_property
    def J(self) -> np.ndarray:
        return dirac_matrix()

    # value actions used by covariant derivatives and wedge products
    def act_ad(self, x, y):
        return np.einsum("...a,...b,abc->...c", x, y, self.algebra.structure_constants.astype(complex), optimize=True)

    def act_W(self, x, w):
        return np.einsum("...a,aij,...j->...i", x, self.higgs_rep.images, w, optimize=True)

    def act_V(self, x, psi):
        return np.einsum("...a,aij,...sj->...si", x, self.spinor_rep.images, psi, optimize=True)

    def action(self, kind: str):
        try:
            return {"ad": self.act_ad, "W": self.act_W, "V": self.act_V}[kind]
        except KeyError:
            raise ValueError(f"unknown value action {kind!r}") from None

    def with_yukawa(self, yukawa: YukawaForm) -> "GaugeModel":
        return GaugeModel(self.algebra, self.spinor_rep, self.higgs_rep, yukawa, self.name)


def _fix_phase(y: np.ndarray) -> np.ndarray:
    # SVD phases are arbitrary; pin the largest entry to 1
    k = int(np.argmax(np.abs(y).ravel() > 0.5 * np.max(np.abs(y))))
    return y / y.ravel()[k]


def toy_electroweak_model(g_Y: float = 1.0, y_l=Fraction(-1, 2), y_r=Fraction(-1), y_w=Fraction(1, 2),
                          coupling: complex = 1.0) -> GaugeModel:
    """su(2) + u(1) with V_L = C^2, V_R = C, W = C^2: a lepton-like sector small enough
    for exhaustive identity checks."""
    s2, one = su(2), u1()
    VL = outer_tensor([fundamental_rep(s2), hypercharge_rep(y_l)])
    VR = outer_tensor([trivial_rep(s2), hypercharge_rep(y_r)])
    W = outer_tensor([fundamental_rep(s2), hypercharge_rep(y_w)])
    alg = direct_sum([s2, one])
    V = direct_sum_reps([VL, VR], split=(2, 1), labels=(("L", 0, 2), ("R", 2, 3)))
    V = Representation(alg, V.images, V.split, V.labels)
    W = Representation(alg, W.images)
    basis = invariant_yukawa_basis(alg, V, W)
    if basis.shape[0] == 0:
        coef = np.zeros((2, 4, 1), complex)
    else:
        coef = coupling * _fix_phase(basis[0])
    return GaugeModel(alg, V, W, YukawaForm(coef, g_Y), "toy-electroweak")


def abelian_model(y_l=Fraction(1), y_r=Fraction(1), y_w=Fraction(0), dl: int = 1, dr: int = 1) -> GaugeModel:
    """u(1) acting by hypercharges; Yukawa set to zero unless invariant."""
    one = u1()
    imgs = np.zeros((1, dl + dr, dl + dr), complex)
    imgs[0, :dl, :dl] = 3j * float(y_l) * np.eye(dl)
    imgs[0, dl:, dl:] = 3j * float(y_r) * np.eye(dr)
    V = Representation(one, imgs, (dl, dr))
    W = hypercharge_rep(y_w)
    basis = invariant_yukawa_basis(one, V, W)
    coef = _fix_phase(basis[0]) if basis.shape[0] else np.zeros((dl, 2, dr), complex)
    return GaugeModel(one, V, W, YukawaForm(coef), "abelian")


@dataclass(frozen=True, eq=False)
class FieldTriple:
    """(psi, A, Phi): twisted spinor in the + sector, connection 1-form, Higgs field."""

    psi: SpacetimePoly
    A: Form
    Phi: SpacetimePoly

    def __post_init__(self):
        if self.A.degree != 1:
            raise ValueError("the connection must be a 1-form")
        if len(self.psi.vshape) != 2 or self.psi.vshape[0] != DIM:
            raise ValueError("psi must have value shape (4, d)")
        if len(self.Phi.vshape) != 1:
            raise ValueError("Phi must be vector valued")

    @classmethod
    def vacuum(cls, model: GaugeModel) -> "FieldTriple":
        return cls(SpacetimePoly.zero((DIM, model.d)), Form.zero(1, (model.n,)), SpacetimePoly.zero((model.dw,)))

    @classmethod
    def random(cls, model: GaugeModel, rng: np.random.Generator, degree: int = 2, scale: float = 0.5,
               degrees: tuple | None = None) -> "FieldTriple":
        dpsi, dA, dPhi = degrees or (degree, degree, degree)
        psi = SpacetimePoly.random(rng, dpsi, (DIM, model.d), scale).map(
            lambda c: np.where(model.layout.mask("+"), c, 0))
        A = SpacetimePoly.random(rng, dA, (DIM, model.n), scale).map(lambda c: c.real + 0j)
        Phi = SpacetimePoly.random(rng, dPhi, (model.dw,), scale)
        return cls(psi, Form(A, 1), Phi)

    def check(self, model: GaugeModel, tol: float = 0.0) -> None:
        if self.psi.vshape != (DIM, model.d) or self.A.value_shape != (model.n,) or self.Phi.vshape != (model.dw,):
            raise ValueError("field shapes do not match the model")
        off = self.psi.coefs[:, ~model.layout.mask("+")] if self.psi.nterms else np.zeros(0)
        if off.size and np.max(np.abs(off)) > tol:
            raise ValueError("psi leaves the + chirality sector")
        if self.A.poly.nterms and np.max(np.abs(self.A.poly.coefs.imag)) > tol:
            raise ValueError("connection components leave the algebra span (imaginary coordinates)")

    def left(self, model: GaugeModel) -> SpacetimePoly:
        return self.psi.map(model.layout.left)

    def right(self, model: GaugeModel) -> SpacetimePoly:
        return self.psi.map(model.layout.right)

    def __add__(self, other: "FieldTriple") -> "FieldTriple":
        return FieldTriple(self.psi + other.psi, self.A + other.A, self.Phi + other.Phi)

    def __sub__(self, other: "FieldTriple") -> "FieldTriple":
        return FieldTriple(self.psi - other.psi, self.A - other.A, self.Phi - other.Phi)

    def scaled(self, t) -> "FieldTriple":
        return FieldTriple(self.psi * t, self.A * t, self.Phi * t)

    def shifted(self, x0) -> "FieldTriple":
        """Re-expand all components about x0."""
        return FieldTriple(self.psi.shift(x0), Form(self.A.poly.shift(x0), 1), self.Phi.shift(x0))


@dataclass(frozen=True, eq=False)
class SourceTuple:
    """(K_L, K_R, J, F): spinor sources, an algebra-valued 1-form and a Higgs source."""

    K_L: SpacetimePoly
    K_R: SpacetimePoly
    J: Form
    F: SpacetimePoly
    meta: dict = field(default_factory=dict)

    def at(self, points) -> dict:
        return {"K_L": self.K_L(points), "K_R": self.K_R(points), "J": self.J(points), "F": self.F(points)}

    def __add__(self, other: "SourceTuple") -> "SourceTuple":
        return SourceTuple(self.K_L + other.K_L, self.K_R + other.K_R, self.J + other.J, self.F + other.F)

    def __sub__(self, other: "SourceTuple") -> "SourceTuple":
        return SourceTuple(self.K_L - other.K_L, self.K_R - other.K_R, self.J - other.J, self.F - other.F)
