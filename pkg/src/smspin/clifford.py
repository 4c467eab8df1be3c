"""Chiral gamma matrices, Clifford multiplication, the Dirac form and bullet actions.

Conventions: metric g = diag(-1, 1, 1, 1); a vector X acts on spinors by
X.psi = i X^a Gamma_a psi.  Spinors are length-4 arrays; twisted spinors are
(4, d) arrays (spinor row index, internal column index).  Leading batch axes
are allowed everywhere, which is how polynomial coefficients are processed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mathkit.scalars import GaussRat, exact_array

METRIC = np.array([-1, 1, 1, 1])
DIM = 4


def _pauli():
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]])
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return s1, s2, s3


def _standard_lower() -> np.ndarray:
    z, e = np.zeros((2, 2)), np.eye(2)
    g = [1j * np.block([[z, e], [e, z]])]
    for s in _pauli():
        g.append(1j * np.block([[z, s], [-s, z]]))
    return np.array(g)


def _exactify(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        re, im = round(v.real), round(v.imag)
        if abs(v - complex(re, im)) > 1e-14:
            raise ValueError("entry is not a Gaussian integer")
        out[idx] = GaussRat(re, im)
    return out


@dataclass(frozen=True)
class GammaSet:
    """Gamma matrices with lowered indices, their raised versions and Gamma_5."""

    lower: np.ndarray
    exact: bool = False
    upper: np.ndarray = field(init=False)
    g5: np.ndarray = field(init=False)

    def __post_init__(self):
        lo = self.lower
        up = np.array([METRIC[a] * lo[a] for a in range(DIM)])
        if self.exact:
            i = GaussRat(0, 1)
            g5 = -i * (lo[0] @ lo[1] @ lo[2] @ lo[3])
        else:
            g5 = -1j * (lo[0] @ lo[1] @ lo[2] @ lo[3])
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "g5", g5)

    @classmethod
    def standard(cls, exact: bool = False) -> "GammaSet":
        lo = _standard_lower()
        return cls(_exactify(lo), True) if exact else cls(lo, False)

    def unit(self):
        return GaussRat(0, 1) if self.exact else 1j

    def anticommutator_residual(self) -> float:
        """max |G^a G^b + G^b G^a - 2 g^ab id| over all 16 pairs."""
        worst = 0.0
        eye = np.eye(DIM)
        for a in range(DIM):
            for b in range(DIM):
                lhs = self.upper[a] @ self.upper[b] + self.upper[b] @ self.upper[a]
                diff = lhs - 2 * (METRIC[a] if a == b else 0) * (exact_array(eye.astype(int)) if self.exact else eye)
                worst = max(worst, float(np.max(np.abs(np.asarray(diff, dtype=complex)))))
        return worst


_FLOAT = GammaSet.standard(False)
_EXACT = None


def gamma_set(exact: bool = False) -> GammaSet:
    global _EXACT
    if not exact:
        return _FLOAT
    if _EXACT is None:
        _EXACT = GammaSet.standard(True)
    return _EXACT


def gamma(alpha: int, variance: str = "lower", exact: bool = False) -> np.ndarray:
    if alpha not in range(DIM):
        raise ValueError("alpha must be in 0..3")
    gs = gamma_set(exact)
    if variance == "lower":
        return gs.lower[alpha]
    if variance == "upper":
        return gs.upper[alpha]
    raise ValueError("variance is 'lower' or 'upper'")


def gamma5(exact: bool = False) -> np.ndarray:
    return gamma_set(exact).g5


def dirac_matrix(exact: bool = False) -> np.ndarray:
    """Matrix J of the Dirac form <psi, phi> = psi^dagger J phi.

    J = Gamma_5 Gamma_0 = i[[0, 1], [-1, 0]].  It is Hermitian, pairs the
    chiral halves with each other and makes X.psi = i X^a Gamma_a psi
    skew-adjoint.  The matrix -i Gamma_0 has the first two properties but makes
    Clifford multiplication self-adjoint instead (see ``printed_dirac_matrix``).
    """
    gs = gamma_set(exact)
    return gs.g5 @ gs.lower[0]


def printed_dirac_matrix(exact: bool = False) -> np.ndarray:
    """-i Gamma_0; kept as a negative control for the skew-adjointness check."""
    gs = gamma_set(exact)
    return (-gs.unit()) * gs.lower[0]


def minkowski_dot(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]


def raise_index(w):
    return np.array([-w[0], w[1], w[2], w[3]], dtype=np.asarray(w).dtype)


def _is_exact(*arrs) -> bool:
    return any(np.asarray(a).dtype == object for a in arrs)


def clifford_matrix(X, exact: bool | None = None) -> np.ndarray:
    """Matrix of psi -> X.psi = i X^a Gamma_a psi."""
    exact = _is_exact(X) if exact is None else exact
    gs = gamma_set(exact)
    m = sum(X[a] * gs.lower[a] for a in range(DIM))
    return gs.unit() * m


def covector_matrix(w, exact: bool | None = None) -> np.ndarray:
    """Matrix of psi -> i w_b Gamma^b psi (Clifford action of the dual vector)."""
    exact = _is_exact(w) if exact is None else exact
    gs = gamma_set(exact)
    return gs.unit() * sum(w[a] * gs.upper[a] for a in range(DIM))


def slash(w, exact: bool | None = None) -> np.ndarray:
    """Gamma^a w_a (no factor i)."""
    exact = _is_exact(w) if exact is None else exact
    gs = gamma_set(exact)
    return sum(w[a] * gs.upper[a] for a in range(DIM))


def spin_apply(M: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply a 4x4 matrix on the spinor index (axis -1 for plain spinors, -2 for twisted)."""
    psi = np.asarray(psi)
    if psi.shape[-1] == DIM and psi.ndim == 1:
        return M @ psi
    return np.matmul(M, psi)


def clifford_mult(X, psi: np.ndarray) -> np.ndarray:
    return spin_apply(clifford_matrix(X, _is_exact(X, psi)), psi)


def dirac_form(psi: np.ndarray, phi: np.ndarray, J: np.ndarray | None = None):
    """psi^dagger J phi, contracted over spinor and internal indices."""
    exact = _is_exact(psi, phi)
    J = dirac_matrix(exact) if J is None else J
    jphi = spin_apply(J, phi)
    prod = np.conj(psi) * jphi
    if np.asarray(psi).ndim == 1:
        return prod.sum()
    return prod.sum(axis=(-2, -1))


def internal_apply(B: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Act with an internal matrix on the column index of a twisted spinor."""
    return np.matmul(psi, np.swapaxes(B, -1, -2))


def bullet(degree: int, internal_mats, Psi: np.ndarray, exact: bool | None = None) -> np.ndarray:
    """Bullet action of a Lie-algebra valued form of degree 0, 1 or 2."""
    mats = np.asarray(internal_mats)
    d = Psi.shape[-1]
    exact = _is_exact(mats, Psi) if exact is None else exact
    gs = gamma_set(exact)
    if degree == 0:
        if mats.shape[-2:] != (d, d):
            raise ValueError("internal dimension mismatch")
        return internal_apply(mats, Psi)
    if degree == 1:
        if mats.shape[-3:] != (DIM, d, d):
            raise ValueError("degree-1 bullet needs four d x d matrices")
        out = 0
        for k in range(DIM):
            out = out + gs.unit() * spin_apply(gs.upper[k], internal_apply(mats[..., k, :, :], Psi))
        return out
    if degree == 2:
        if mats.shape[-4:] != (DIM, DIM, d, d):
            raise ValueError("degree-2 bullet needs a 4x4 array of d x d matrices")
        if not _antisymmetric(mats):
            raise ValueError("degree-2 component array is not antisymmetric")
        out = 0
        for i in range(DIM):
            for j in range(DIM):
                if i == j:
                    continue
                out = out - spin_apply(gs.upper[i] @ gs.upper[j], internal_apply(mats[..., i, j, :, :], Psi))
        return out
    raise ValueError("degree must be 0, 1 or 2")


def _antisymmetric(m: np.ndarray) -> bool:
    sw = np.swapaxes(m, -4, -3)
    if m.dtype == object:
        return not any(bool(v) for v in (m + sw).flat)
    return bool(np.allclose(m, -sw, atol=1e-12 * max(1.0, float(np.max(np.abs(m))))))


class NullVectorError(ValueError):
    """The Clifford factor is (numerically) lightlike and cannot be inverted."""


def invert_clifford(v, chi: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Solve v.psi = chi via psi = -(1/g(v,v)) v.chi."""
    gvv = minkowski_dot(v, v)
    if _is_exact(v, chi):
        if not gvv:
            raise NullVectorError("lightlike vector")
        return clifford_mult(v, chi) * (GaussRat(-1) / gvv)
    scale = float(np.sum(np.abs(np.asarray(v, dtype=float)) ** 2))
    if abs(gvv) < tol * scale or scale == 0:
        raise NullVectorError(f"|g(v,v)| = {abs(gvv):.3e} below tolerance")
    return -clifford_mult(v, chi) / gvv


# chirality

def proj_L(psi: np.ndarray) -> np.ndarray:
    out = np.array(psi, copy=True)
    out[..., 2:, :] = 0
    return out


def proj_R(psi: np.ndarray) -> np.ndarray:
    out = np.array(psi, copy=True)
    out[..., :2, :] = 0
    return out


@dataclass(frozen=True)
class SectorLayout:
    """Internal splitting V = V_L + V_R (columns 0..dl-1 are V_L)."""

    dl: int
    dr: int

    @property
    def d(self) -> int:
        return self.dl + self.dr

    def mask(self, sector: str = "+") -> np.ndarray:
        m = np.zeros((DIM, self.d), bool)
        if sector == "+":
            m[:2, :self.dl] = True
            m[2:, self.dl:] = True
        elif sector == "-":
            m[:2, self.dl:] = True
            m[2:, :self.dl] = True
        else:
            raise ValueError("sector is '+' or '-'")
        return m

    def project(self, psi: np.ndarray, sector: str = "+") -> np.ndarray:
        return np.where(self.mask(sector), psi, 0)

    def in_sector(self, psi: np.ndarray, sector: str = "+", tol: float = 0.0) -> bool:
        off = np.asarray(psi)[..., ~self.mask(sector)]
        return bool(np.all(np.abs(off.astype(complex)) <= tol))

    def left(self, psi: np.ndarray) -> np.ndarray:
        """psi_L: rows 0-1 carrying V_L columns."""
        out = np.zeros_like(psi)
        out[..., :2, :self.dl] = psi[..., :2, :self.dl]
        return out

    def right(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi)
        out[..., 2:, self.dl:] = psi[..., 2:, self.dl:]
        return out
