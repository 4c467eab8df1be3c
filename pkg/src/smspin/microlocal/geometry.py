"""Causal diamond, light rays and the three-ray interaction geometry.

Covectors are lists of four components (lower index).  Raising uses
g = diag(-1, 1, 1, 1), so xi^sharp = (-xi_0, xi_1, xi_2, xi_3).

Scalars may be floats, exact rationals (``GaussRat``), quadratic surds
(``QuadraticNumber``, when a(s) = sqrt(1 - s^2) is irrational) or
``LaurentTaylorJet`` objects; the construction is the same in all cases.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from ..mathkit.jets import JetWindow, LaurentTaylorJet
from ..mathkit.scalars import GaussRat, QuadraticNumber, rational_sqrt

METRIC = (-1, 1, 1, 1)


class GeometryError(ValueError):
    """A constructed point misses the set it is required to lie in."""

    def __init__(self, message: str, point=None):
        super().__init__(message if point is None else f"{message}: {np.round(_floats(point), 12).tolist()}")
        self.point = point


def _floats(v) -> np.ndarray:
    return np.array([complex(x).real if not isinstance(x, float) else x for x in v], dtype=float)


def _is_mp(x) -> bool:
    return hasattr(x, "_mpf_") or hasattr(x, "_mpc_")


def exact_scalar(x):
    """Rationals (int, Fraction, str, mpq) become GaussRat; floats stay floats."""
    if isinstance(x, (GaussRat, QuadraticNumber, LaurentTaylorJet, float, complex)) or _is_mp(x):
        return x
    if isinstance(x, (int, Fraction, Rational, str)) or type(x).__name__ == "mpq":
        return GaussRat(x)
    return float(x)


def is_exact(x) -> bool:
    if isinstance(x, LaurentTaylorJet):
        return x.exact
    return isinstance(x, (GaussRat, QuadraticNumber))


def a_of(x):
    """a(x) = sqrt(1 - x^2); exact when possible, a quadratic surd otherwise."""
    if isinstance(x, LaurentTaylorJet):
        return (1 - x * x).sqrt()
    x = exact_scalar(x)
    if _is_mp(x):
        return (1 - x * x) ** 0.5
    if isinstance(x, float):
        if abs(x) > 1:
            raise ValueError("a(x) needs |x| <= 1")
        return math.sqrt(1.0 - x * x)
    if isinstance(x, complex):
        return cmath.sqrt(1.0 - x * x)
    if isinstance(x, QuadraticNumber):
        raise TypeError("a(x) of a quadratic surd is not supported")
    if x.im:
        raise ValueError("a(x) needs a real argument")
    rad = 1 - x * x
    if rad.re < 0:
        raise ValueError("a(x) needs |x| <= 1")
    try:
        return rational_sqrt(rad)
    except ValueError:
        return QuadraticNumber.sqrt_of(rad.re)


def pythagorean(m: int, n: int) -> Fraction:
    """2mn / (m^2 + n^2): a rational x with rational a(x)."""
    return Fraction(2 * m * n, m * m + n * n)


def raise_index(v) -> list:
    return [-v[0], v[1], v[2], v[3]]


def minkowski(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]


def _iszero(x, tol: float) -> bool:
    if isinstance(x, LaurentTaylorJet):
        return not np.any([bool(v) for v in x.coef.flat]) if x.exact else bool(np.max(np.abs(x.coef), initial=0) <= tol)
    if is_exact(x):
        return not x
    return abs(x) <= tol


# sets
@dataclass(frozen=True)
class CausalDomain:
    """The diamond |x| <= t + 1, |x| <= 1 - t and the probe set inside it."""

    eps0: float = 0.5

    def __post_init__(self):
        if not 0 < self.eps0 < 1:
            raise ValueError("eps0 must lie in (0, 1)")

    @staticmethod
    def _split(point):
        p = _floats(point)
        return p[0], float(np.linalg.norm(p[1:]))

    def in_diamond(self, point, tol: float = 1e-12) -> bool:
        t, r = self._split(point)
        return r <= t + 1 + tol and r <= 1 - t + tol

    def in_interior(self, point) -> bool:
        t, r = self._split(point)
        return r < t + 1 and r < 1 - t

    def in_probe_set(self, point) -> bool:
        _, r = self._split(point)
        return self.in_interior(point) and r < self.eps0

    def on_past_boundary(self, point, tol: float = 1e-12) -> bool:
        t, r = self._split(point)
        return abs(r - (t + 1)) <= tol and t <= 0 + tol

    @property
    def base_point(self) -> np.ndarray:
        return np.array([-1.0, 0.0, 0.0, 0.0])


# rays
@dataclass(frozen=True)
class LightRay:
    """Incoming: gamma(t) = y + (l - t) xi^sharp; outgoing: gamma(t) = y - t xi^sharp."""

    base: tuple
    covector: tuple
    length: float
    mode: str = "incoming"
    validate: bool = True

    def __post_init__(self):
        if self.mode not in ("incoming", "outgoing"):
            raise ValueError("mode is 'incoming' or 'outgoing'")
        if self.validate and not _iszero(minkowski(self.covector, self.covector), 1e-12):
            raise GeometryError("ray covector is not lightlike", self.covector)

    @property
    def sharp(self) -> np.ndarray:
        return _floats(raise_index(self.covector))

    @property
    def velocity(self) -> np.ndarray:
        """d gamma / dt (constant)."""
        return -self.sharp

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, float)
        y = _floats(self.base)
        if self.mode == "incoming":
            return y + (float(_floats([self.length])[0]) - t)[..., None] * self.sharp
        return y - t[..., None] * self.sharp

    @property
    def start(self) -> np.ndarray:
        return self(0.0)

    @property
    def end(self) -> np.ndarray:
        return self(float(_floats([self.length])[0]))


# the interaction geometry
def _rotate(v, frame):
    R = np.asarray(frame, float)
    if any(is_exact(c) for c in v):
        raise ValueError("rotated frames need float geometry")
    return [v[0]] + [sum(R[i, j] * v[1 + j] for j in range(3)) for i in range(3)]


def kappa(r, s) -> tuple:
    """(kappa_1, kappa_2, kappa_3) with eta = sum kappa_i xi_i."""
    r, s = exact_scalar(r), exact_scalar(s)
    if not isinstance(s, LaurentTaylorJet):
        if _iszero(s, 0.0):
            raise ZeroDivisionError("kappa has a pole at s = 0")
        if isinstance(s, float) and not 0 < s < 1:
            raise ValueError("kappa needs 0 < s < 1")
    ar, as_ = a_of(r), a_of(s)
    try:
        q = (1 + ar) / (1 - as_)
    except ValueError as exc:
        raise ValueError("exact geometry needs a(r) or a(s) rational (see pythagorean); use floats otherwise") from exc
    half = GaussRat(1, 0) / 2 if is_exact(q) else 0.5
    k1 = 1 - q
    k2 = q * half + r / s * half
    k3 = q * half - r / s * half
    return k1, k2, k3


@dataclass
class InteractionGeometry:
    """Covectors, coefficients and endpoints of the three incoming rays and the outgoing ray."""

    y: list
    ell: object
    r: object
    s: object
    xi: dict
    omega: dict
    kappa: dict
    eta: list
    frame: np.ndarray | None = None
    x_points: dict = field(default_factory=dict)
    z: list | None = None

    @property
    def exact(self) -> bool:
        return is_exact(self.eta[1])

    def eta_part(self, j: int) -> list:
        return [self.kappa[j] * c for c in self.xi[j]]

    def incoming_ray(self, j: int) -> LightRay:
        return LightRay(tuple(self.y), tuple(self.xi[j]), self.ell, "incoming", validate=False)

    def outgoing_ray(self) -> LightRay:
        return LightRay(tuple(self.y), tuple(self.eta), self.ell, "outgoing", validate=False)

    def invariant_residuals(self, tol: float = 1e-12) -> dict:
        """Each invariant -> True when it holds (exactly for exact geometries)."""
        out = {}
        for j in (1, 2, 3):
            out[f"xi{j}_lightlike"] = _iszero(minkowski(self.xi[j], self.xi[j]), tol)
            out[f"omega{j}_orthogonal"] = _iszero(minkowski(self.omega[j], self.xi[j]), tol)
        out["eta_lightlike"] = _iszero(minkowski(self.eta, self.eta), tol)
        dec = [self.eta[m] - sum(self.kappa[j] * self.xi[j][m] for j in (1, 2, 3)) for m in range(4)]
        # kappa grows like 1/s^2, so float rounding in the sum scales with it
        scale = 1.0
        if not self.exact and not isinstance(self.eta[1], LaurentTaylorJet):
            scale += max(abs(complex(self.kappa[j])) for j in (1, 2, 3))
        out["eta_decomposition"] = all(_iszero(c, tol * scale) for c in dec)
        return out


def covectors(r, s, frame=None) -> tuple[dict, dict, list]:
    """xi_(1..3), omega_(1..3) and eta in the rotated frame (identity by default)."""
    r, s = exact_scalar(r), exact_scalar(s)
    one = GaussRat(1) if is_exact(s) or is_exact(r) else 1.0
    zero = one * 0
    if isinstance(s, LaurentTaylorJet) or isinstance(r, LaurentTaylorJet):
        win = (s if isinstance(s, LaurentTaylorJet) else r).window
        ex = (s if isinstance(s, LaurentTaylorJet) else r).exact
        one = LaurentTaylorJet.constant(GaussRat(1) if ex else 1.0, win, exact=ex)
        zero = one * 0
    as_, ar = a_of(s), a_of(r)
    xi = {1: [one, one, zero, zero], 2: [one, one * as_, one * s, zero], 3: [one, one * as_, -(one * s), zero]}
    omega = {1: [zero, zero, one, zero], 2: [one * s, zero, one, zero], 3: [-(one * s), zero, one, zero]}
    eta = [one, -(one * ar), one * r, zero]
    if frame is not None:
        xi = {j: _rotate(v, frame) for j, v in xi.items()}
        omega = {j: _rotate(v, frame) for j, v in omega.items()}
        eta = _rotate(eta, frame)
    return xi, omega, eta


def build_geometry(y, ell, r, s, domain: CausalDomain | None = None, frame=None,
                   check: bool = True) -> InteractionGeometry:
    """Assemble and validate the geometry; endpoints x_(i) = y + l xi_(i)^sharp, z = y - l eta^sharp.

    ``frame`` is an optional spatial rotation (3x3) applied to every covector;
    the coefficients kappa are rotation invariant.  With a ``domain`` the
    points are checked: y in the diamond, every x_(i) and z in the probe set.
    """
    r, s, ell = exact_scalar(r), exact_scalar(s), exact_scalar(ell)
    y = [exact_scalar(c) for c in y]
    xi, omega, eta = covectors(r, s, frame)
    k = dict(zip((1, 2, 3), kappa(r, s)))
    geo = InteractionGeometry(y, ell, r, s, xi, omega, k, eta, None if frame is None else np.asarray(frame, float))
    exact_pts = all(is_exact(c) for c in y + [ell]) and is_exact(eta[1])
    conv = (lambda v: list(v)) if exact_pts else (lambda v: [float(c) for c in to_float_vector(v)])
    yy, ll = conv(y), (ell if exact_pts else float(to_float_vector([ell])[0]))
    for j in (1, 2, 3):
        geo.x_points[j] = [yy[m] + ll * c for m, c in enumerate(conv(raise_index(xi[j])))]
    geo.z = [yy[m] - ll * c for m, c in enumerate(conv(raise_index(eta)))]
    if check:
        tol = 1e-12
        bad = [name for name, ok in geo.invariant_residuals(tol).items() if not ok]
        if bad:
            raise GeometryError(f"geometry invariants violated: {', '.join(bad)}")
    if domain is not None:
        if not domain.in_diamond(y):
            raise GeometryError("y is not in the diamond", y)
        for j in (1, 2, 3):
            if not domain.in_probe_set(geo.x_points[j]):
                raise GeometryError(f"x_({j}) is not in the probe set", geo.x_points[j])
        if not domain.in_probe_set(geo.z):
            raise GeometryError("z is not in the probe set", geo.z)
    return geo


def frame_towards(direction) -> np.ndarray:
    """A rotation R with R e_1 = direction / |direction| (spatial 3-vector)."""
    n = np.asarray(direction, float)
    n = n / np.linalg.norm(n)
    helper = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e2 = helper - (helper @ n) * n
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(n, e2)
    return np.stack([n, e2, e3], axis=1)


def jet_geometry(s=None, r=None, window: JetWindow | None = None, exact: bool = True, frame=None) -> InteractionGeometry:
    """Geometry with jet-valued entries: a parameter left as None becomes the jet variable."""
    from ..mathkit.jets import SEQUENCE_WINDOW
    win = window or SEQUENCE_WINDOW
    sv = LaurentTaylorJet.s_var(win, exact) if s is None else exact_scalar(s)
    rv = LaurentTaylorJet.r_var(win, exact) if r is None else exact_scalar(r)
    xi, omega, eta = covectors(rv, sv, frame)
    k = dict(zip((1, 2, 3), kappa(rv, sv)))
    return InteractionGeometry([0, 0, 0, 0], 1, rv, sv, xi, omega, k, eta, frame)


def to_float_vector(v) -> np.ndarray:
    return np.array([complex(x).real if is_exact(x) else float(x) for x in v])


__all__ = ["CausalDomain", "LightRay", "InteractionGeometry", "GeometryError", "kappa", "build_geometry",
           "covectors", "jet_geometry", "a_of", "pythagorean", "minkowski", "raise_index", "frame_towards",
           "exact_scalar", "is_exact", "to_float_vector"]
