"""Gauge transformations acting on field triples.

A ``GaugeTransformField`` is a product U = exp(xi_1) exp(xi_2) ... of
exponentials of algebra-valued polynomials, or a sampled map (the temporal
gauge).  Since U is not polynomial, the transformed fields are returned as
local Taylor jets: ``gauge_apply`` expands everything about a centre x0 and
returns a ``FieldTriple`` in the local variable u = x - x0, exact through the
requested order (one less for the connection, which involves dU).
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..mathkit.ode import ode_integrate
from ..mathkit.poly import DIM, SpacetimePoly
from .forms import Form
from .model import FieldTriple, GaugeModel

BASE_POINT = np.array([-1.0, 0.0, 0.0, 0.0])


class NotGroupValuedError(ValueError):
    """U fails to be unitary at some sample point."""


def _rep_images(model: GaugeModel, rep: str) -> np.ndarray:
    if rep == "ambient":
        return model.algebra.basis
    if rep in ("V", "spinor"):
        return model.spinor_rep.images
    if rep in ("W", "higgs"):
        return model.higgs_rep.images
    raise ValueError(f"unknown representation {rep!r}")


def _matmul_jet(a: SpacetimePoly, b: SpacetimePoly, order: int) -> SpacetimePoly:
    return a.bilinear(b, np.matmul, max_degree=order)


def exp_jet(X: SpacetimePoly, order: int, terms: int = 18) -> SpacetimePoly:
    """exp of a matrix-valued polynomial, truncated to total degree ``order``.

    Scaling and squaring: exp(X) = exp(X / 2^s)^(2^s) with a Taylor series for
    the scaled exponential.
    """
    X = X.truncate(order)
    k = X.vshape[0]
    size = float(np.sum(np.abs(X.coefs))) if X.nterms else 0.0
    s = max(0, int(np.ceil(np.log2(size / 0.25))) if size > 0.25 else 0)
    Y = X / (2 ** s)
    eye = SpacetimePoly.constant(np.eye(k, dtype=complex))
    out, term = eye, eye
    for n in range(1, terms + 1):
        term = _matmul_jet(term, Y, order) / n
        if term.nterms == 0:
            break
        out = out + term
    for _ in range(s):
        out = _matmul_jet(out, out, order)
    return out


class GaugeTransformField:
    """U = exp(xi_1) exp(xi_2) ... with algebra-valued polynomial exponents.

    ``pointed`` asserts U(p) = id at the base point p = (-1, 0, 0, 0);
    constant transformations are built with pointed=False.
    """

    def __init__(self, model: GaugeModel, exponents=(), pointed: bool = True,
                 sampler: Callable[[np.ndarray], np.ndarray] | None = None):
        self.model = model
        self.exponents = tuple(exponents)
        self.pointed = pointed
        self.sampler = sampler
        for xi in self.exponents:
            if xi.vshape != (model.n,):
                raise ValueError(f"exponent must be algebra valued with shape ({model.n},)")
        if pointed and sampler is None and self.base_defect() > 1e-12:
            raise ValueError("U(p) != id at the base point; pass pointed=False for unpointed transformations")

    # construction
    @classmethod
    def identity(cls, model: GaugeModel) -> "GaugeTransformField":
        return cls(model, ())

    @classmethod
    def constant(cls, model: GaugeModel, X) -> "GaugeTransformField":
        return cls(model, (SpacetimePoly.constant(np.asarray(X, float) + 0j),), pointed=False)

    @classmethod
    def from_exponent(cls, model: GaugeModel, xi: SpacetimePoly, pointed: bool = True) -> "GaugeTransformField":
        return cls(model, (xi,), pointed)

    @classmethod
    def random(cls, model: GaugeModel, rng: np.random.Generator, degree: int = 2, scale: float = 0.5,
               pointed: bool = True) -> "GaugeTransformField":
        xi = SpacetimePoly.random(rng, degree, (model.n,), scale).map(lambda c: c.real + 0j)
        if pointed:
            xi = xi - SpacetimePoly.constant(xi(BASE_POINT))
        return cls(model, (xi,), pointed)

    @property
    def sampled(self) -> bool:
        return self.sampler is not None

    def compose(self, other: "GaugeTransformField") -> "GaugeTransformField":
        """The product self * other (apply self first under the right action)."""
        if self.sampled or other.sampled:
            raise TypeError("composition of sampled gauge fields is not supported")
        return GaugeTransformField(self.model, self.exponents + other.exponents, self.pointed and other.pointed)

    __mul__ = compose

    # evaluation
    def matrix(self, points, rep: str = "ambient") -> np.ndarray:
        """U (pushed through ``rep``) at the given points, shape (N, k, k)."""
        pts = np.atleast_2d(np.asarray(points, float))
        if self.sampled:
            if rep != "ambient":
                raise ValueError("sampled gauge fields are available in the ambient representation only")
            return self.sampler(pts)
        imgs = _rep_images(self.model, rep)
        k = imgs.shape[1]
        out = np.broadcast_to(np.eye(k, dtype=complex), (pts.shape[0], k, k)).copy()
        for xi in self.exponents:
            X = np.einsum("na,aij->nij", xi(pts).real, imgs)
            out = out @ expm_skew(X)
        return out

    def base_defect(self) -> float:
        U = self.matrix(BASE_POINT[None, :])
        return float(np.max(np.abs(U[0] - np.eye(U.shape[1]))))

    def jet(self, x0, order: int, rep: str = "ambient", inverse: bool = False) -> SpacetimePoly:
        """Taylor jet of U (or U^-1) about x0 in the local variable, truncated at ``order``."""
        if self.sampled:
            raise TypeError("sampled gauge fields have no polynomial jets")
        imgs = _rep_images(self.model, rep)
        k = imgs.shape[1]
        out = SpacetimePoly.constant(np.eye(k, dtype=complex))
        seq = reversed(self.exponents) if inverse else self.exponents
        for xi in seq:
            X = xi.shift(x0).truncate(order).map(lambda c: np.einsum("na,aij->nij", c.real, imgs) + 0j)
            E = exp_jet(-X if inverse else X, order)
            out = _matmul_jet(out, E, order)
        return out


def expm_skew(X: np.ndarray) -> np.ndarray:
    """exp of a batch of anti-Hermitian matrices via the eigendecomposition of the Hermitian iX."""
    w, v = np.linalg.eigh(1j * X)
    return np.einsum("nij,nj,nkj->nik", v, np.exp(-1j * w), np.conj(v))


def check_group_valued(model: GaugeModel, U: GaugeTransformField, points, tol: float = 1e-10) -> None:
    M = U.matrix(points)
    err = np.max(np.abs(np.conj(np.swapaxes(M, -1, -2)) @ M - np.eye(M.shape[-1]))) if M.size else 0.0
    if not np.isfinite(err) or err > tol:
        raise NotGroupValuedError(f"U is not unitary at the sample points (defect {err:.2e})")


def gauge_apply(model: GaugeModel, fields: FieldTriple, U: GaugeTransformField, center, order: int = 3) -> FieldTriple:
    """(psi . U, A . U, Phi . U) as Taylor jets about ``center``.

    psi . U = rho(U^-1) psi, Phi . U = rho(U^-1) Phi, A . U = U^-1 A U + U^-1 dU.
    Values and derivatives at u = 0 are exact through ``order`` for psi and
    Phi and through ``order - 1`` for the connection.
    """
    x0 = np.asarray(center, float)
    check_group_valued(model, U, x0[None, :])
    Vinv = U.jet(x0, order, "V", inverse=True)
    Winv = U.jet(x0, order, "W", inverse=True)
    psi = Vinv.bilinear(fields.psi.shift(x0), lambda M, p: np.einsum("...ij,...sj->...si", M, p), max_degree=order)
    Phi = Winv.bilinear(fields.Phi.shift(x0), lambda M, f: np.einsum("...ij,...j->...i", M, f), max_degree=order)

    alg = model.algebra
    Ug = U.jet(x0, order, "ambient")
    Uinv = U.jet(x0, order, "ambient", inverse=True)
    Amat = fields.A.poly.shift(x0).map(lambda c: np.einsum("nma,aij->nmij", c.real, alg.basis) + 0j)
    conj = Uinv.bilinear(Amat, lambda a, b: np.einsum("...ij,...mjk->...mik", a, b), max_degree=order)
    conj = conj.bilinear(Ug, lambda a, b: np.einsum("...mij,...jk->...mik", a, b), max_degree=order)
    mc = Uinv.bilinear(Ug.gradient(), lambda a, b: np.einsum("...ij,...mjk->...mik", a, b), max_degree=order - 1)
    A_mat = (conj + mc).truncate(order - 1)
    A = A_mat.map(lambda c: alg.coords(c).astype(complex))
    return FieldTriple(psi, Form(A, 1), Phi)


def gauge_apply_at(model: GaugeModel, fields: FieldTriple, U: GaugeTransformField, points) -> dict:
    """Pointwise values of the transformed fields (psi, A, Phi) at each point."""
    out = {"psi": [], "A": [], "Phi": []}
    for x in np.atleast_2d(points):
        jet = gauge_apply(model, fields, U, x, order=1)
        out["psi"].append(jet.psi(np.zeros(DIM)))
        out["A"].append(jet.A.poly(np.zeros(DIM)))
        out["Phi"].append(jet.Phi(np.zeros(DIM)))
    return {k: np.array(v) for k, v in out.items()}


# temporal gauge
def entry_time(points) -> np.ndarray:
    """Time at which the vertical line through x meets the backward boundary t = |x| - 1."""
    pts = np.atleast_2d(points)
    return np.linalg.norm(pts[:, 1:], axis=1) - 1.0


def temporal_gauge(model: GaugeModel, V: Form, steps: int = 400) -> GaugeTransformField:
    """U with d_0 U = -V_0 U and U = id on the backward boundary, sampled on demand.

    Each point (t, x) is reached along the vertical line from (|x| - 1, x);
    all lines are integrated together in the rescaled parameter s in [0, 1].
    """
    alg = model.algebra
    V0 = V.poly[0]

    def sampler(points):
        pts = np.atleast_2d(np.asarray(points, float))
        t0 = entry_time(pts)
        length = pts[:, 0] - t0

        def rhs(s, y):
            q = pts.copy()
            q[:, 0] = t0 + s * length
            G = np.einsum("na,aij->nij", V0(q).real, alg.basis)
            return -length[:, None, None] * (G @ y)

        m = alg.ambient
        y0 = np.broadcast_to(np.eye(m, dtype=complex), (pts.shape[0], m, m))
        return ode_integrate(rhs, y0, 1.0, steps)[-1].value

    return GaugeTransformField(model, (), pointed=True, sampler=sampler)


def temporal_component(model: GaugeModel, V: Form, U: GaugeTransformField, points, h: float = 1e-3) -> np.ndarray:
    """Coordinates of (V . U)_0 = U^-1 V_0 U + U^-1 d_0 U at the points (fourth order difference in t)."""
    alg = model.algebra
    pts = np.atleast_2d(np.asarray(points, float))
    shifts = {k: pts + np.array([k * h, 0, 0, 0]) for k in (-2, -1, 1, 2)}
    Us = {k: U.matrix(q) for k, q in shifts.items()}
    U0 = U.matrix(pts)
    dU = (Us[-2] - 8 * Us[-1] + 8 * Us[1] - Us[2]) / (12 * h)
    Uinv = np.linalg.inv(U0)
    V0 = np.einsum("na,aij->nij", V.poly[0](pts).real, alg.basis)
    return alg.coords(Uinv @ V0 @ U0 + Uinv @ dU, check=False)


__all__ = ["BASE_POINT", "GaugeTransformField", "NotGroupValuedError", "exp_jet", "expm_skew", "check_group_valued",
           "gauge_apply", "gauge_apply_at", "entry_time", "temporal_gauge", "temporal_component"]
