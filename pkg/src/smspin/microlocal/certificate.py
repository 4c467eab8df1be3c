"""Certificate for the small-(s, r) behaviour of the three-fold Dirac symbol.

With c_1(s) the r^1 coefficient of N(s, r) and P = G^0 + G^1,

    E(s) = -4/(3 s^2) P c_1(s) - b^3 P I_1

must decay like s.  Each s of the sequence is handled with exact Taylor jets
in r; the full Laurent mode additionally checks the s^2 coefficients of N
against the two closed-form blocks, in exact arithmetic.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from ..clifford import gamma_set
from ..mathkit.jets import JetWindow, JetWindowError
from ..mathkit.scalars import to_complex
from .geometry import InteractionGeometry, build_geometry, covectors, jet_geometry, kappa
from .symbols import Arith, IModel, LightlikeSumError, display_blocks, hat_phi, internal, three_fold_symbol
from .transport import clifford_covector, clifford_vector

FULL_WINDOW = JetWindow(-12, 8, 2)
DEFAULT_S = (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32))
RATIO_BOUNDS = (0.4, 0.6)


def as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _P(exact: bool = False):
    G = gamma_set(exact).upper
    return G[0] + G[1]


@dataclass
class CertificateEntry:
    s: str
    residual: float
    constant: float
    limit_norm: float
    c1_norm: float
    numeric_residual: float | None = None
    dual_mode_gap: float | None = None
    seconds: float = 0.0


@dataclass
class Certificate:
    entries: list
    ratios: list
    slope: float | None
    constant: float
    ratio_bounds: tuple
    ratios_ok: bool
    blocks: dict | None
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.ratios_ok and (self.blocks is None or bool(self.blocks["match"]))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def residual_at(b, I1, dI2, dI3, s, r_order: int = 2):
    """(E(s), lim_{r->0} N, c_1(s)) from exact r-jets at rational s; arrays of complex numbers."""
    s = as_fraction(s)
    geo = jet_geometry(s=s, window=JetWindow(0, 0, max(int(r_order), 1)))
    N = three_fold_symbol(geo, np.asarray(b), IModel.linear(I1, dI2, dI3)).total
    lim = to_complex(N.coefficient(0, 0))
    c1 = to_complex(N.coefficient(0, 1))
    return _residual(b, I1, c1, float(s)), lim, c1


def _residual(b, I1, c1, s: float) -> np.ndarray:
    P = _P()
    b = np.asarray(b, complex)
    b3 = b @ b @ b
    return -4 / (3 * s * s) * (P @ c1) - internal(P @ np.asarray(I1, complex), b3)


def _complex_r_geometry(r, s) -> InteractionGeometry:
    xi, omega, eta = covectors(r, s)
    return InteractionGeometry([0, 0, 0, 0], 1, r, s, xi, omega, dict(zip((1, 2, 3), kappa(r, s))), eta)


def numeric_residual(b, I1, dI2, dI3, s, radius: float = 0.125, points: int = 16, dps: int = 30) -> np.ndarray:
    """E(s) from point evaluations of N only (no jets).

    c_1 is the Cauchy coefficient (1/M) sum_k N(r_k) / r_k over r_k = radius * exp(2 pi i k / M),
    evaluated in mpmath at ``dps`` digits; N itself cancels heavily for small s.
    """
    im = IModel.linear(I1, dI2, dI3)
    b = np.asarray(b, complex)
    with mpmath.workdps(dps):
        sv = mpmath.mpf(Fraction(s).numerator) / Fraction(s).denominator
        rad = mpmath.mpf(radius)
        total = 0
        for k in range(points):
            rk = rad * mpmath.expjpi(mpmath.mpf(2 * k) / points)
            total = total + three_fold_symbol(_complex_r_geometry(rk, sv), b, im).total / rk
        c1 = np.array(total / points, dtype=complex)
    return _residual(b, I1, c1, float(s))


def block_check(b, I1, dI2, dI3, window: JetWindow = FULL_WINDOW) -> dict:
    """Exact comparison of -4/3 [s^2 r^0] N and -4/3 [s^2 r^1] N with the two closed-form blocks."""
    ar = Arith(True)
    geo = jet_geometry(window=window)
    N = three_fold_symbol(geo, np.asarray(b), IModel.linear(I1, dI2, dI3)).total
    blocks = display_blocks(ar.const(b), ar.const(I1), ar.const(dI2), ar.const(dI3), exact=True)
    lead = N.lo if N.lo < N.prec else None
    low_vanish = lead is None or lead >= 2
    pole = N.coefficient(2, 0) * Fraction(-4, 3)
    finite = N.coefficient(2, 1) * Fraction(-4, 3)
    pole_ok = bool(np.all(pole == blocks["pole"]))
    finite_ok = bool(np.all(finite == blocks["finite"]))
    P = _P(True)
    annihilated = bool(np.all(np.vectorize(lambda x: not x)(P @ blocks["pole"])))
    return {
        "match": pole_ok and finite_ok and low_vanish,
        "pole_match": pole_ok,
        "finite_match": finite_ok,
        "leading_s_order": lead,
        "orders_below_two_vanish": low_vanish,
        "window": [window.s_min, window.s_max, window.r_max],
        "pole_annihilated_by_P": annihilated,
        "pole_norm": float(np.linalg.norm(to_complex(blocks["pole"]))),
        "P_pole_norm": float(np.linalg.norm(to_complex(P @ blocks["pole"]))),
    }


def phase_factor(b, I1, s: float = 0.25, r: float = 0.1) -> complex:
    """Ratio between the printed one-fold symbol and -1/2 omega . gamma' . b I on the incoming ray."""
    geo = build_geometry([0.0, 0.0, 0.0, 0.0], 1.0, r, s, check=False)
    b = np.asarray(b, complex)
    I1 = np.asarray(I1, complex)
    printed = hat_phi(1, geo, b, IModel.linear(I1, 0 * I1, 0 * I1), Arith(False))
    xi = np.array(geo.xi[1], float)
    vel = -np.array([-xi[0], xi[1], xi[2], xi[3]])
    closed = -0.5 * (clifford_covector(np.array(geo.omega[1], float)) @ clifford_vector(vel) @ I1) @ b.T
    den = np.vdot(closed, closed)
    if abs(den) == 0:
        return complex("nan")
    return complex(np.vdot(closed, printed) / den)


def asymptotic_identity_certificate(b, I1, dI2, dI3, s_sequence=DEFAULT_S, r_order: int = 2,
                                    check_blocks: bool = True, window: JetWindow = FULL_WINDOW,
                                    numeric: bool = True, ratio_bounds=RATIO_BOUNDS) -> Certificate:
    """Run the certificate; entries are ordered by the given (decreasing) s sequence."""
    seq = [as_fraction(s) for s in s_sequence]
    if any(a <= b_ for a, b_ in zip(seq, seq[1:])):
        raise ValueError("s_sequence must be strictly decreasing")
    entries, norms = [], []
    for s in seq:
        t0 = time.perf_counter()
        try:
            E, lim, c1 = residual_at(b, I1, dI2, dI3, s, r_order)
        except (JetWindowError, LightlikeSumError) as exc:
            raise JetWindowError(f"certificate failed at s = {s}: {exc}") from exc
        nrm = float(np.linalg.norm(E))
        num = gap = None
        if numeric:
            En = numeric_residual(b, I1, dI2, dI3, s)
            num, gap = float(np.linalg.norm(En)), float(np.linalg.norm(En - E))
        entries.append(CertificateEntry(str(s), nrm, nrm / float(s), float(np.linalg.norm(lim)),
                                        float(np.linalg.norm(c1)), num, gap, time.perf_counter() - t0))
        norms.append(nrm)
    scale = max(norms, default=0.0)
    trivial = scale == 0.0
    ratios = [n2 / n1 if n1 > 0 else None for n1, n2 in zip(norms, norms[1:])]
    lo, hi = ratio_bounds
    ratios_ok = trivial or all(q is not None and lo <= q <= hi for q in ratios)
    slope = None
    if len(seq) >= 2 and all(n > 0 for n in norms):
        slope = float(np.polyfit([math.log(float(s)) for s in seq], [math.log(n) for n in norms], 1)[0])
    blocks = block_check(b, I1, dI2, dI3, window) if check_blocks else None
    meta = {
        "phase_factor_printed_over_transport": _jsonable(phase_factor(b, I1)),
        "conventions": "printed one-fold formula and the transported solution are both evaluated",
        "trivial_input": trivial,
        "r_order": int(r_order),
    }
    return Certificate(entries, ratios, slope, max((e.constant for e in entries), default=0.0),
                       tuple(ratio_bounds), ratios_ok, blocks, meta)


def _jsonable(z: complex):
    return [float(z.real), float(z.imag)]


def random_inputs(rng: np.random.Generator, d: int = 2, low: int = -3, high: int = 3, hyper: complex = 3j):
    """(b, I1, I2', I3') with b = hyper * id and small random integer spinors."""
    b = hyper * np.eye(d)
    I1, dI2, dI3 = (rng.integers(low, high + 1, (4, d)) for _ in range(3))
    return b, I1, dI2, dI3


__all__ = ["Certificate", "CertificateEntry", "asymptotic_identity_certificate", "residual_at",
           "numeric_residual", "block_check", "phase_factor", "random_inputs", "FULL_WINDOW", "DEFAULT_S",
           "RATIO_BOUNDS", "as_fraction"]
