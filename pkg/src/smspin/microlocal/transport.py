"""Parallel transport, the truncated ray transform and transport of symbols along light rays.

Transports are integrated at the derivative level directly in the chosen
representation: u' = -rho(A_gamma(gamma')) u, u(0) = id, with classical RK4.
Several end times are handled at once by integrating in a rescaled parameter
sigma in [0, 1].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..clifford import gamma_set
from ..fieldtheory.forms import Form
from ..fieldtheory.gauge import expm_skew
from ..fieldtheory.interactions import interactions
from ..fieldtheory.model import FieldTriple, GaugeModel
from ..mathkit.ode import NonFiniteStateError, ode_integrate
from ..mathkit.poly import SpacetimePoly
from ..mathkit.quadrature import quadrature_nodes
from .geometry import LightRay

METRIC = np.array([-1.0, 1.0, 1.0, 1.0])
Connection = Form | SpacetimePoly | Callable[[np.ndarray], np.ndarray] | None


class NotCentralError(ValueError):
    """The source element does not commute with the algebra."""


def rep_images(model: GaugeModel, rep: str) -> np.ndarray:
    if rep in ("V", "spinor"):
        return model.spinor_rep.images
    if rep in ("W", "higgs"):
        return model.higgs_rep.images
    if rep == "ambient":
        return model.algebra.basis
    if rep in ("ad", "adjoint"):
        return np.transpose(model.algebra.structure_constants, (0, 2, 1)).astype(complex)
    raise ValueError(f"unknown representation {rep!r}")


def _connection_values(A: Connection, points: np.ndarray, n: int) -> np.ndarray:
    """Algebra coordinates A_mu at the points, shape (N, 4, n)."""
    if A is None:
        return np.zeros((points.shape[0], 4, n))
    if isinstance(A, Form):
        A = A.poly
    vals = A(points) if isinstance(A, SpacetimePoly) else np.asarray(A(points))
    return np.real(vals)


def generator_along(model: GaugeModel, A: Connection, ray: LightRay, rep: str = "V"):
    """t -> rho(A_gamma(t)(gamma')) for an array of parameters, shape (N, k, k)."""
    imgs = rep_images(model, rep)
    vel = ray.velocity

    def gen(t):
        pts = np.atleast_2d(ray(np.atleast_1d(t)))
        X = np.einsum("nma,m->na", _connection_values(A, pts, model.n), vel)
        return np.einsum("na,aij->nij", X, imgs)

    return gen


def _is_constant(A: Connection) -> bool:
    if A is None:
        return True
    p = A.poly if isinstance(A, Form) else A
    return isinstance(p, SpacetimePoly) and p.degree <= 0


def transport_batch(model: GaugeModel, A: Connection, ray: LightRay, times, rep: str = "V",
                    steps: int = 400, method: str = "auto") -> np.ndarray:
    """P_gamma(t_k) for every t_k, shape (K, k, k).

    method: "rk4", "exp" (constant connections only) or "auto".
    """
    times = np.atleast_1d(np.asarray(times, float))
    k = rep_images(model, rep).shape[1]
    eye = np.broadcast_to(np.eye(k, dtype=complex), (times.size, k, k))
    if A is None:
        return eye.copy()
    gen = generator_along(model, A, ray, rep)
    if method == "exp" or (method == "auto" and _is_constant(A)):
        if not _is_constant(A):
            raise ValueError("the exponential shortcut needs a constant connection")
        G = gen(0.0)[0]
        return expm_skew(-times[:, None, None] * G[None])
    if method not in ("rk4", "auto"):
        raise ValueError(f"unknown transport method {method!r}")

    def rhs(sigma, u):
        return -times[:, None, None] * (gen(sigma * times) @ u)

    try:
        return ode_integrate(rhs, eye, 1.0, steps)[-1].value
    except NonFiniteStateError as exc:
        raise NonFiniteStateError(f"parallel transport blew up: {exc}") from exc


def parallel_transport(model: GaugeModel, A: Connection, ray: LightRay, t: float | None = None, rep: str = "V",
                       steps: int = 400, method: str = "auto") -> np.ndarray:
    """P_gamma(t): the transport from gamma(0) to gamma(t), pushed through ``rep``."""
    t = float(ray.length) if t is None else float(t)
    return transport_batch(model, A, ray, [t], rep, steps, method)[0]


def _psi_values(psi, points: np.ndarray) -> np.ndarray:
    if isinstance(psi, SpacetimePoly):
        return psi(points)
    return np.asarray(psi(points))


def ray_transform(model: GaugeModel, psi, A: Connection, ray: LightRay, t: float | None = None,
                  nodes: int = 32, steps: int = 400, rep: str = "V", method: str = "auto") -> np.ndarray:
    """I(t) = P(t) int_0^t P(s)^-1 psi(gamma(s)) ds with the internal rep acting on columns."""
    t = float(ray.length) if t is None else float(t)
    s, w = quadrature_nodes(t, nodes)
    vals = _psi_values(psi, ray(s))
    P = transport_batch(model, A, ray, np.append(s, t), rep, steps, method)
    Pinv = np.linalg.inv(P[:-1])
    integrand = np.einsum("nij,nsj->nsi", Pinv, vals)
    inner = np.tensordot(w, integrand, axes=(0, 0))
    return inner @ P[-1].T


@dataclass
class SymbolTriple:
    """(varsigma, w, upsilon) attached to a point and covector; w has one row per coframe index."""

    varsigma: np.ndarray
    w: np.ndarray
    upsilon: np.ndarray
    point: np.ndarray | None = None
    covector: np.ndarray | None = None

    @classmethod
    def zero(cls, model: GaugeModel) -> "SymbolTriple":
        return cls(np.zeros((4, model.d), complex), np.zeros((4, model.n), complex), np.zeros(model.dw, complex))

    def pack(self) -> np.ndarray:
        return np.concatenate([np.ravel(self.varsigma), np.ravel(self.w), np.ravel(self.upsilon)]).astype(complex)

    @classmethod
    def unpack(cls, model: GaugeModel, v: np.ndarray, point=None, covector=None) -> "SymbolTriple":
        a, b = 4 * model.d, 4 * model.d + 4 * model.n
        return cls(v[:a].reshape(4, model.d), v[a:b].reshape(4, model.n), v[b:], point, covector)

    def norm(self) -> float:
        return float(np.linalg.norm(self.pack()))


def _chiral(model: GaugeModel, psi: np.ndarray):
    dl = model.layout.dl
    L, R = psi.copy(), psi.copy()
    L[..., dl:] = 0
    R[..., :dl] = 0
    return L, R


def transport_system(model: GaugeModel, initial: SymbolTriple, ray: LightRay, background: FieldTriple,
                     t: float | None = None, steps: int = 400) -> SymbolTriple:
    """Integrate the coupled transport equations for (varsigma_L, varsigma_R, w, upsilon).

    varsigma' = -rho(A(g'))varsigma - 1/2 rho(w).(g'.psi) - 1/2 (I_YH,L(upsilon, g'.psi_R) + I_YH,R(g'.psi_L, upsilon))
    w_b'      = -[A(g'), w_b] + 1/2 g'_b I_YMH(upsilon, Phi)
    upsilon'  = -rho(A(g'))upsilon
    with g' the (constant) velocity of the ray and rho(w).X = sum_b i Gamma^b rho(w_b) X.
    """
    t = float(ray.length) if t is None else float(t)
    I = interactions(model)
    iGup = 1j * gamma_set().upper
    iGlow = 1j * gamma_set().lower
    vel = ray.velocity
    vel_low = METRIC * vel
    dot_vel = np.einsum("a,ast->st", vel, iGlow)
    rV, rW = model.spinor_rep.images, model.higgs_rep.images
    C = model.algebra.structure_constants.astype(complex)

    def rhs(tau, v):
        S = SymbolTriple.unpack(model, v)
        x = ray(np.array([tau]))
        X = np.einsum("ma,m->a", _connection_values(background.A, x, model.n)[0], vel)
        psi = background.psi(x)[0]
        Phi = background.Phi(x)[0]
        gpsi = dot_vel @ psi
        gL, gR = _chiral(model, gpsi)
        GV = np.einsum("a,aij->ij", X, rV)
        GW = np.einsum("a,aij->ij", X, rW)
        wpsi = np.einsum("bst,bij,tj->si", iGup, np.einsum("ba,aij->bij", S.w, rV), gpsi)
        yuk = I.yh_left(S.upsilon, gR) + I.yh_right(gL, S.upsilon)
        ds = -S.varsigma @ GV.T - 0.5 * wpsi - 0.5 * yuk
        dw = -np.einsum("a,bc,ace->be", X, S.w, C) + 0.5 * vel_low[:, None] * I.ymh(S.upsilon, Phi)[None, :]
        du = -GW @ S.upsilon
        return SymbolTriple(ds, dw, du).pack()

    final = ode_integrate(rhs, initial.pack(), t, steps)[-1].value
    return SymbolTriple.unpack(model, final, ray(np.array([t]))[0], initial.covector)


def clifford_covector(w) -> np.ndarray:
    """omega. = i omega_a Gamma^a."""
    return np.einsum("a,ast->st", np.asarray(w, complex), 1j * gamma_set().upper)


def clifford_vector(v) -> np.ndarray:
    """X. = i X^a Gamma_a."""
    return np.einsum("a,ast->st", np.asarray(v, complex), 1j * gamma_set().lower)


def central_matrix(model: GaugeModel, b, tol: float = 1e-12) -> np.ndarray:
    """rho_*(b) for an algebra element b, after checking that b is central."""
    b = np.asarray(b, float)
    C = model.algebra.structure_constants
    if np.max(np.abs(np.einsum("a,abc->bc", b, C)), initial=0.0) > tol:
        raise NotCentralError("the source element is not central")
    return np.einsum("a,aij->ij", b, model.spinor_rep.images)


def symbol_transport_closed_form(model: GaugeModel, b, omega, ray: LightRay, psi, A: Connection,
                                 t: float | None = None, nodes: int = 32, steps: int = 400) -> np.ndarray:
    """varsigma(t) = -1/2 omega . gamma' . rho(b) I_gamma(t)."""
    B = central_matrix(model, b)
    I_t = ray_transform(model, psi, A, ray, t, nodes, steps)
    M = clifford_covector(omega) @ clifford_vector(ray.velocity)
    return -0.5 * (M @ I_t) @ B.T


def central_initial_data(model: GaugeModel, b, omega) -> SymbolTriple:
    """varsigma = 0, w = b (x) omega, upsilon = 0."""
    w = np.outer(np.asarray(omega, complex), np.asarray(b, complex))
    return SymbolTriple(np.zeros((4, model.d), complex), w, np.zeros(model.dw, complex))


def temporal_symbol_projection(w, eta) -> np.ndarray:
    """w_b - (eta_b / eta_0) w_0 for covector components along the first axis."""
    w = np.asarray(w)
    eta = np.asarray(eta)
    if eta[0] == 0:
        raise ZeroDivisionError("eta_0 = 0: the projection is undefined")
    ratio = eta / eta[0]
    return w - ratio.reshape((4,) + (1,) * (w.ndim - 1)) * w[0][None]


__all__ = ["NotCentralError", "SymbolTriple", "parallel_transport", "transport_batch", "ray_transform",
           "transport_system", "symbol_transport_closed_form", "central_initial_data", "central_matrix",
           "temporal_symbol_projection", "generator_along", "rep_images", "clifford_covector", "clifford_vector"]
