"""Reconstruction of the spinor field from simulated three-fold measurements.

At a point y and for a ray arriving from the probe point p the chain is

1. the r^1 coefficient c_1(s) of N(s, r), from an r-jet or an r-stencil of measurements;
2. X(s) = -4/(3 s^2) xi.c_1(s) b^-3, a proxy for xi.I_(1), extrapolated to s = 0;
3. v.I = -i xi.I along the ray with velocity v = -xi^sharp, differentiated in the
   length of the ray with the transport removed: v.psi(y);
4. psi(y) from two rays through u = v + v~, which is timelike.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..clifford import NullVectorError, invert_clifford, minkowski_dot, slash
from ..mathkit.jets import LaurentTaylorJet
from ..microlocal.geometry import CausalDomain, GeometryError, LightRay, build_geometry, frame_towards
from ..microlocal.transport import Connection, parallel_transport
from .oracle import MeasurementOracle, extract_interaction


class HyperchargeError(ValueError):
    """b is not invertible, so the leading term cannot be divided out."""


class ExtrapolationError(ArithmeticError):
    pass


class UnreachablePointError(GeometryError):
    pass


class ParallelDirectionsError(NullVectorError):
    pass


@dataclass(frozen=True)
class RecoverySettings:
    s_sequence: tuple = (1 / 8, 1 / 16, 1 / 32)
    richardson_order: int | None = None
    r_mode: str = "jet"
    r_order: int = 2
    r_step: float = 1 / 32
    delta: float = 1 / 64
    rho: float = 0.2
    eps0: float = 0.5
    consistency_tol: float = 5e-2

    def __post_init__(self):
        seq = tuple(float(s) for s in self.s_sequence)
        if len(seq) and any(a <= b for a, b in zip(seq, seq[1:])):
            raise ValueError("s_sequence must be strictly decreasing")
        if self.r_mode not in ("jet", "stencil"):
            raise ValueError("r_mode is 'jet' or 'stencil'")
        object.__setattr__(self, "s_sequence", seq)

    @property
    def order(self) -> int:
        k = len(self.s_sequence) - 1 if self.richardson_order is None else self.richardson_order
        if k < 0 or k >= max(len(self.s_sequence), 1):
            raise ExtrapolationError("Richardson order needs more points in the s sequence")
        return k


# elementary steps
def r_expansion(samples: dict) -> tuple[np.ndarray, np.ndarray]:
    """(N(s, 0+), c_1) from N at several r by polynomial interpolation."""
    rs = np.array(sorted(samples), float)
    if rs.size < 2:
        raise ExtrapolationError("need at least two r samples")
    V = np.vander(rs, rs.size, increasing=True)
    vals = np.stack([np.asarray(samples[r]) for r in sorted(samples)])
    coef = np.linalg.solve(V, vals.reshape(rs.size, -1))
    return coef[0].reshape(vals.shape[1:]), coef[1].reshape(vals.shape[1:])


def richardson(values, s_values, order: int) -> np.ndarray:
    """Value at s = 0 of the degree-``order`` polynomial through the last order+1 points."""
    if order == 0:
        return np.asarray(values[-1])
    k = order + 1
    if len(values) < k:
        raise ExtrapolationError("not enough points for the requested order")
    S = np.asarray(s_values[-k:], float)
    V = np.vander(S, k, increasing=True)
    vals = np.stack([np.asarray(v) for v in values[-k:]])
    coef = np.linalg.solve(V, vals.reshape(k, -1))
    out = coef[0].reshape(vals.shape[1:])
    if not np.all(np.isfinite(out)):
        raise ExtrapolationError("extrapolation diverged")
    return out


def _inv_cube(b) -> np.ndarray:
    b = np.asarray(b, complex)
    b3 = b @ b @ b
    if b3.size == 0 or abs(np.linalg.det(b3)) < 1e-12 * max(1.0, np.max(np.abs(b3))) ** b3.shape[0]:
        raise HyperchargeError("the source acts by a singular matrix: the representation is not hypercharged")
    return np.linalg.inv(b3)


@dataclass
class GammaIEstimate:
    value: np.ndarray
    per_s: dict
    limits: dict
    order: int


def recover_gamma_I(samples: dict, b, xi=(1.0, 1.0, 0.0, 0.0), order: int | None = None) -> GammaIEstimate:
    """xi.I_(1) (G^0 + G^1 for the standard frame) from interaction samples.

    ``samples`` maps s to either a Taylor jet of N in r or a dict {r: N}.
    """
    binv = _inv_cube(b)
    P = slash(np.asarray(xi, float))
    seq = sorted(samples, reverse=True)
    per_s, limits = {}, {}
    for s in seq:
        smp = samples[s]
        if isinstance(smp, LaurentTaylorJet):
            lim, c1 = np.asarray(smp.coefficient(0, 0), complex), np.asarray(smp.coefficient(0, 1), complex)
        else:
            lim, c1 = r_expansion(smp)
        per_s[s] = P @ (-4 / (3 * s * s) * c1) @ binv.T
        limits[s] = lim
    order = len(seq) - 1 if order is None else order
    value = richardson([per_s[s] for s in seq], seq, order) if seq else np.zeros((4, np.shape(b)[0]), complex)
    return GammaIEstimate(value, per_s, limits, order)


# rays through a point
@dataclass(frozen=True)
class RayChoice:
    y: np.ndarray
    probe: np.ndarray
    ell: float
    frame: np.ndarray
    xi: np.ndarray

    @property
    def velocity(self) -> np.ndarray:
        return np.array([1.0, *(-self.xi[1:])])

    def ray(self) -> LightRay:
        return LightRay(tuple(self.y), tuple(self.xi), self.ell)


def ray_choice(y, probe) -> RayChoice:
    """The light ray that leaves the spatial point ``probe`` and reaches y."""
    y = np.asarray(y, float)
    n = np.asarray(probe, float) - y[1:]
    ell = float(np.linalg.norm(n))
    if ell == 0:
        raise UnreachablePointError("probe lies on the vertical line through y", y)
    return RayChoice(y, np.asarray(probe, float), ell, frame_towards(n), np.array([1.0, *(n / ell)]))


def _samples(oracle: MeasurementOracle, y, ell, frame, settings: RecoverySettings, A: Connection) -> dict:
    out = {}
    for s in settings.s_sequence:
        if settings.r_mode == "jet":
            out[s] = oracle.interaction_jet(y, ell, s, frame, settings.r_order)
            continue
        h = settings.r_step * s
        rs = {}
        for k in (-2, -1, 1, 2):
            geo = build_geometry(y, ell, k * h, s, frame=frame, check=False)
            rs[k * h] = extract_interaction(oracle.query(geo).varsigma, geo, oracle.model, A,
                                            oracle.normalization, oracle.steps)
        out[s] = rs
    return out


def gamma_I_at(oracle: MeasurementOracle, y, ell: float, frame, settings: RecoverySettings,
               A: Connection = None) -> GammaIEstimate:
    xi = np.array([1.0, *frame[:, 0]])
    return recover_gamma_I(_samples(oracle, y, ell, frame, settings, A), oracle.b, xi, settings.order)


@dataclass
class VPsi:
    v: np.ndarray
    value: np.ndarray
    consistency: float
    flagged: bool


def recover_v_psi(y, probe, oracle: MeasurementOracle, A: Connection = None,
                  settings: RecoverySettings | None = None) -> VPsi:
    """v.psi(y) for the ray from ``probe`` to y, by moving y along the ray.

    The end point moves to y + tau v with the ray length l + tau, so the start
    stays fixed; v.I(l + tau) is untwisted by the transport and differentiated
    with the fourth order stencil at tau = +-delta, +-2 delta.
    """
    st = settings or RecoverySettings()
    rc = ray_choice(y, probe)
    v = rc.velocity
    d = st.delta
    taus = (-2 * d, -d, d, 2 * d)
    P = {}
    if A is not None:
        ts = [rc.ell + t for t in (0.0,) + taus]
        for t in ts:
            P[t] = parallel_transport(oracle.model, A, rc.ray(), t, steps=oracle.steps)
    Q = {}
    for tau in taus:
        est = gamma_I_at(oracle, rc.y + tau * v, rc.ell + tau, rc.frame, st, A)
        vI = -1j * est.value
        Q[tau] = vI if A is None else vI @ np.linalg.inv(P[rc.ell + tau]).T
    D1 = (Q[d] - Q[-d]) / (2 * d)
    D2 = (Q[2 * d] - Q[-2 * d]) / (4 * d)
    D = (4 * D1 - D2) / 3
    if A is not None:
        D = D @ P[rc.ell].T
    scale = max(float(np.linalg.norm(D)), 1e-300)
    cons = float(np.linalg.norm(D1 - D2)) / scale if np.linalg.norm(D) > 0 else 0.0
    return VPsi(v, D, cons, cons > st.consistency_tol)


def recover_psi_point(y, probes, oracle: MeasurementOracle, A: Connection = None,
                      settings: RecoverySettings | None = None, tol: float = 1e-6) -> tuple[np.ndarray, dict]:
    """psi(y) from two rays: (v + v~) . psi = v.psi + v~.psi."""
    p1, p2 = probes
    v1, v2 = ray_choice(y, p1).velocity, ray_choice(y, p2).velocity
    u = v1 + v2
    if abs(minkowski_dot(u, u)) < tol * float(u @ u):
        raise ParallelDirectionsError("the two ray directions are (nearly) parallel")
    a = recover_v_psi(y, p1, oracle, A, settings)
    b = recover_v_psi(y, p2, oracle, A, settings)
    psi = invert_clifford(u, a.value + b.value)
    return psi, {"g_uu": float(minkowski_dot(u, u)), "consistency": max(a.consistency, b.consistency),
                 "flagged": a.flagged or b.flagged}


def default_probes(y, rho: float) -> tuple[np.ndarray, np.ndarray]:
    """+-rho e with e a unit vector orthogonal to the spatial part of y."""
    x = np.asarray(y, float)[1:]
    helper = np.array([0.0, 1.0, 0.0]) if abs(x[1]) <= 0.9 * max(np.linalg.norm(x), 1e-300) else np.array([1.0, 0.0, 0.0])
    e = helper - (helper @ x) / max(x @ x, 1e-300) * x if np.linalg.norm(x) > 0 else helper
    e = e / np.linalg.norm(e)
    return rho * e, -rho * e


def check_reachable(y, probes, settings: RecoverySettings, domain: CausalDomain) -> None:
    """Every geometry the pipeline will request must have its sources and receiver in the probe set."""
    if not domain.in_interior(y):
        raise UnreachablePointError("point is not interior to the diamond", y)
    for p in probes:
        rc = ray_choice(y, p)
        for tau in (-2 * settings.delta, 2 * settings.delta):
            for s in settings.s_sequence:
                try:
                    build_geometry(rc.y + tau * rc.velocity, rc.ell + tau, 0.0, s, domain=domain, frame=rc.frame,
                                   check=False)
                except GeometryError as exc:
                    raise UnreachablePointError(f"ray from {np.round(p, 6).tolist()} leaves the probe set ({exc})",
                                                y) from exc


def default_grid(n_t: int = 5, n_x: int = 5, t_range=(-0.2, 0.2), x_range=(0.1, 0.4)) -> np.ndarray:
    ts = np.linspace(*t_range, n_t)
    xs = np.linspace(*x_range, n_x)
    return np.array([[t, x, 0.0, 0.0] for t in ts for x in xs])


def seeded_spinor(model, rng: np.random.Generator, degree: int = 2, scale: float = 0.3, offset=1.0):
    """A random polynomial twisted spinor in the + sector with a constant part of size ``offset``."""
    from ..mathkit.poly import SpacetimePoly
    dl, d = model.layout.dl, model.d
    mask = np.zeros((4, d))
    mask[:2, :dl] = 1
    mask[2:, dl:] = 1
    p = SpacetimePoly.random(rng, degree, (4, d), scale).map(lambda c: c * mask)
    const = offset * mask * np.exp(1j * rng.uniform(0, 2 * math.pi, (4, d)))
    return p + SpacetimePoly.constant(const)


# the whole field
def _point_task(args):
    y, oracle, A, settings, domain = args
    probes = default_probes(y, settings.rho)
    try:
        check_reachable(y, probes, settings, domain)
    except UnreachablePointError as exc:
        return None, {"reason": str(exc)}
    psi, info = recover_psi_point(y, probes, oracle, A, settings)
    return psi, info


@dataclass
class RecoveryReport:
    points: np.ndarray
    recovered: np.ndarray
    truth: np.ndarray
    abs_error: np.ndarray
    rel_error: np.ndarray
    unreachable: list
    flagged: list
    parameters: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def max_relative_error(self) -> float:
        ok = np.isfinite(self.rel_error)
        return float(np.max(self.rel_error[ok])) if ok.any() else 0.0

    @property
    def max_abs_error(self) -> float:
        ok = np.isfinite(self.abs_error)
        return float(np.max(self.abs_error[ok])) if ok.any() else 0.0

    def to_dict(self, timing: bool = False) -> dict:
        def cplx(a):
            return [[[float(z.real), float(z.imag)] for z in row] for row in a] if a is not None else None

        pts = []
        for k, y in enumerate(self.points):
            reached = bool(np.all(np.isfinite(self.recovered[k])))
            pts.append({
                "point": [float(c) for c in y],
                "recovered": cplx(self.recovered[k]) if reached else None,
                "truth": cplx(self.truth[k]),
                "abs_error": float(self.abs_error[k]) if reached else None,
                "rel_error": float(self.rel_error[k]) if reached else None,
            })
        out = {"points": pts, "unreachable": self.unreachable, "flagged": self.flagged,
               "max_relative_error": self.max_relative_error, "max_abs_error": self.max_abs_error,
               "parameters": self.parameters}
        if timing:
            out["seconds"] = self.seconds
        return out


def recover_field(points, oracle: MeasurementOracle, A: Connection = None, settings: RecoverySettings | None = None,
                  domain: CausalDomain | None = None, truth=None, jobs: int = 1) -> RecoveryReport:
    """Reconstruct psi at every point; unreachable points are listed, not fatal.

    The relative error at a point is |psi~ - psi| / |psi| (Frobenius norms),
    falling back to the absolute error where psi vanishes.
    """
    st = settings or RecoverySettings()
    dom = domain or CausalDomain(st.eps0)
    pts = np.atleast_2d(np.asarray(points, float))
    truth = oracle.psi if truth is None else truth
    t0 = time.perf_counter()
    tasks = [(y, oracle, A, st, dom) for y in pts]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_point_task, tasks))
    else:
        results = [_point_task(t) for t in tasks]
    m = oracle.model
    rec = np.full((len(pts), 4, m.d), np.nan + 0j)
    true = np.asarray(truth(pts), complex) if len(pts) else np.zeros((0, 4, m.d), complex)
    unreachable, flagged = [], []
    for k, (psi, info) in enumerate(results):
        if psi is None:
            unreachable.append({"point": [float(c) for c in pts[k]], "reason": info["reason"]})
            continue
        rec[k] = psi
        if info["flagged"]:
            flagged.append({"point": [float(c) for c in pts[k]], "consistency": info["consistency"]})
    abs_err = np.linalg.norm((rec - true).reshape(len(pts), -1), axis=1)
    nrm = np.linalg.norm(true.reshape(len(pts), -1), axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(nrm > 0, abs_err / np.where(nrm > 0, nrm, 1.0), abs_err)
    params = {"s_sequence": [float(s) for s in st.s_sequence], "richardson_order": st.order, "r_mode": st.r_mode,
              "r_order": st.r_order, "r_step": st.r_step, "delta": st.delta, "rho": st.rho, "eps0": dom.eps0,
              "nodes": oracle.nodes, "steps": oracle.steps, "normalization": [float(np.real(oracle.normalization)),
                                                                              float(np.imag(oracle.normalization))]}
    return RecoveryReport(pts, rec, true, abs_err, rel, unreachable, flagged, params, time.perf_counter() - t0)


def refinement_study(points, oracle: MeasurementOracle, A: Connection = None, settings: RecoverySettings | None = None,
                     sequences=((1 / 8, 1 / 16, 1 / 32), (1 / 16, 1 / 32, 1 / 64)), jobs: int = 1) -> list:
    """Max relative error for each s sequence (expected to decrease)."""
    st = settings or RecoverySettings()
    out = []
    for seq in sequences:
        rep = recover_field(points, oracle, A, replace(st, s_sequence=tuple(seq)), jobs=jobs)
        out.append({"s_sequence": [float(s) for s in seq], "max_relative_error": rep.max_relative_error,
                    "unreachable": len(rep.unreachable)})
    return out




__all__ = ["RecoverySettings", "RecoveryReport", "GammaIEstimate", "VPsi", "RayChoice", "HyperchargeError",
           "ExtrapolationError", "UnreachablePointError", "ParallelDirectionsError", "recover_gamma_I",
           "recover_v_psi", "recover_psi_point", "recover_field", "refinement_study", "r_expansion", "richardson",
           "ray_choice", "default_probes", "default_grid", "check_reachable", "seeded_spinor", "gamma_I_at"]
