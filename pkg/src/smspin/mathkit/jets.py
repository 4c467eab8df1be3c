"""Truncated Laurent series in s tensored with Taylor series in r.

A jet stores coefficient arrays c[i, j] multiplying s^(lo+i) r^j.  The
s-direction carries an absolute precision ``prec``: coefficients of order
>= prec are unknown, so products and inverses shrink the known range exactly
as the underlying series arithmetic dictates.  The r-direction is truncated
at a fixed order, which loses nothing for lower r-orders.

Coefficients may be exact (object arrays of GaussRat / QuadraticNumber) or
complex floats; the arithmetic is the same.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .scalars import GaussRat, rational_sqrt


class JetWindowError(ArithmeticError):
    """Raised when a jet needs orders outside the configured window."""


@dataclass(frozen=True)
class JetWindow:
    s_min: int = -6
    s_max: int = 4
    r_max: int = 3

    @property
    def nr(self) -> int:
        return self.r_max + 1


SEQUENCE_WINDOW = JetWindow(0, 0, 3)


def _nonzero(x) -> bool:
    if isinstance(x, np.ndarray):
        if x.dtype == object:
            return any(bool(v) for v in x.flat)
        return bool(np.any(x != 0))
    return bool(x)


def _zeros(shape, exact: bool):
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(GaussRat(0))
        return out
    return np.zeros(shape, dtype=complex)


class LaurentTaylorJet:
    __slots__ = ("coef", "lo", "prec", "window")

    def __init__(self, coef: np.ndarray, lo: int, prec: int, window: JetWindow):
        coef = np.asarray(coef)
        if coef.dtype != object:
            coef = coef.astype(complex)
        if coef.ndim < 2 or coef.shape[1] != window.nr:
            raise ValueError("coefficient array must have shape (ns, r_max+1, ...)")
        prec = min(prec, window.s_max + 1)
        ns = max(prec - lo, 0)
        if coef.shape[0] > ns:
            coef = coef[:ns]
        elif coef.shape[0] < ns:
            pad = _zeros((ns - coef.shape[0],) + coef.shape[1:], coef.dtype == object)
            coef = np.concatenate([coef, pad]) if coef.shape[0] else pad
        self.coef, self.lo, self.prec, self.window = coef, lo, prec, window
        self._normalize()

    # construction
    @classmethod
    def constant(cls, value, window: JetWindow, exact: bool | None = None):
        value = np.asarray(value, dtype=object if exact or _is_exact(value) else complex)
        c = _zeros((1, window.nr) + value.shape, value.dtype == object)
        c[0, 0] = value[()] if value.ndim == 0 else value
        return cls(c, 0, window.s_max + 1, window)

    @classmethod
    def s_var(cls, window: JetWindow, exact: bool = True):
        c = _zeros((1, window.nr), exact)
        c[0, 0] = GaussRat(1) if exact else 1.0
        return cls(c, 1, window.s_max + 1, window)

    @classmethod
    def r_var(cls, window: JetWindow, exact: bool = True):
        if window.r_max < 1:
            raise JetWindowError("r-window too small for the r variable")
        c = _zeros((1, window.nr), exact)
        c[0, 1] = GaussRat(1) if exact else 1.0
        return cls(c, 0, window.s_max + 1, window)

    # structure
    @property
    def exact(self) -> bool:
        return self.coef.dtype == object

    @property
    def vshape(self) -> tuple:
        return self.coef.shape[2:]

    def _normalize(self):
        k = 0
        while k < self.coef.shape[0] and not _nonzero(self.coef[k]):
            k += 1
        if k:
            self.coef = self.coef[k:]
            self.lo += k
        if self.coef.shape[0] == 0:
            self.lo = self.prec
        if self.lo < self.window.s_min:
            raise JetWindowError(f"s-order {self.lo} below window minimum {self.window.s_min}")

    def coefficient(self, s_order: int, r_order: int = 0):
        if s_order >= self.prec:
            raise JetWindowError(f"s-order {s_order} not known (precision {self.prec})")
        if r_order > self.window.r_max:
            raise JetWindowError(f"r-order {r_order} beyond window")
        if s_order < self.lo:
            return _zeros(self.vshape, self.exact) if self.vshape else (GaussRat(0) if self.exact else 0j)
        return self.coef[s_order - self.lo, r_order]

    def r_coefficient(self, r_order: int) -> "LaurentTaylorJet":
        """The r^k coefficient as a jet in s alone."""
        c = _zeros(self.coef.shape, self.exact)
        c[:, 0] = self.coef[:, r_order]
        return LaurentTaylorJet(c, self.lo, self.prec, self.window)

    def _lift(self, other) -> "LaurentTaylorJet":
        if isinstance(other, LaurentTaylorJet):
            if other.window != self.window:
                raise ValueError("jets from different windows")
            return other
        return LaurentTaylorJet.constant(other, self.window, exact=self.exact)

    # arithmetic
    def __add__(self, other):
        other = self._lift(other)
        lo = min(self.lo, other.lo)
        prec = min(self.prec, other.prec)
        ns = max(prec - lo, 0)
        vshape = np.broadcast_shapes(self.vshape, other.vshape)
        exact = self.exact or other.exact
        out = _zeros((ns, self.window.nr) + vshape, exact)
        for j in (self, other):
            n = min(j.coef.shape[0], ns - (j.lo - lo)) if j.lo - lo < ns else 0
            if n > 0:
                out[j.lo - lo:j.lo - lo + n] = out[j.lo - lo:j.lo - lo + n] + j.coef[:n]
        return LaurentTaylorJet(out, lo, prec, self.window)

    __radd__ = __add__

    def __neg__(self):
        return LaurentTaylorJet(-self.coef, self.lo, self.prec, self.window)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def bilinear(self, other: "LaurentTaylorJet", fn: Callable) -> "LaurentTaylorJet":
        """Series product through a bilinear coefficient map ``fn``."""
        other = self._lift(other)
        lo = self.lo + other.lo
        prec = min(self.lo + other.prec, other.lo + self.prec)
        ns = max(prec - lo, 0)
        nr = self.window.nr
        na, nb = self.coef.shape[0], other.coef.shape[0]
        va, vb = self.vshape, other.vshape
        exact = self.exact or other.exact
        if ns == 0 or na == 0 or nb == 0:
            probe = np.asarray(fn(np.zeros((1,) + va), np.zeros((1,) + vb)))
            return LaurentTaylorJet(_zeros((0, nr) + probe.shape[1:], exact), prec, prec, self.window)
        na, nb = min(na, ns), min(nb, ns)
        a = self.coef[:na].reshape((na, 1, nr, 1) + va)
        b = other.coef[:nb].reshape((1, nb, 1, nr) + vb)
        prod = np.asarray(fn(a, b))
        vout = prod.shape[4:]
        out = _zeros((ns, nr) + vout, exact)
        for j in range(nr):
            for l in range(nr - j):
                blk = prod[:, :, j, l]
                for i in range(na):
                    m = min(nb, ns - i)
                    if m > 0:
                        out[i:i + m, j + l] = out[i:i + m, j + l] + blk[i, :m]
        return LaurentTaylorJet(out, lo, prec, self.window)

    def __mul__(self, other):
        if isinstance(other, LaurentTaylorJet):
            return self.bilinear(other, np.multiply)
        return LaurentTaylorJet(self.coef * _as_coef(other, self.exact), self.lo, self.prec, self.window)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __matmul__(self, other):
        return self.bilinear(other, np.matmul)

    def __truediv__(self, other):
        if isinstance(other, LaurentTaylorJet):
            return self * other.inverse()
        inv = (GaussRat(1) / other) if self.exact else 1.0 / other
        return self * inv

    def __rtruediv__(self, other):
        return self.inverse() * other

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "LaurentTaylorJet":
        """Apply a constant linear map to every coefficient (leading axes broadcast)."""
        out = np.asarray(fn(self.coef))
        return LaurentTaylorJet(out, self.lo, self.prec, self.window)

    def shift_s(self, k: int) -> "LaurentTaylorJet":
        """Multiply by s^k."""
        return LaurentTaylorJet(self.coef, self.lo + k, self.prec + k, self.window)

    def inverse(self) -> "LaurentTaylorJet":
        if self.vshape:
            raise TypeError("only scalar jets can be inverted")
        if self.coef.shape[0] == 0:
            raise ZeroDivisionError("jet is zero to known precision")
        a = self.coef
        a00 = a[0, 0]
        if not a00:
            raise ZeroDivisionError("leading coefficient has no r^0 term")
        ns, nr = a.shape
        exact = self.exact
        one = GaussRat(1) if exact else 1.0
        inv00 = one / a00
        b = _zeros((ns, nr), exact)
        for i in range(ns):
            for j in range(nr):
                acc = one if (i == 0 and j == 0) else (GaussRat(0) if exact else 0j)
                for k in range(i + 1):
                    for l in range(j + 1):
                        if k == 0 and l == 0:
                            continue
                        acc = acc - a[k, l] * b[i - k, j - l]
                b[i, j] = acc * inv00
        return LaurentTaylorJet(b, -self.lo, -self.lo + ns, self.window)

    def sqrt(self) -> "LaurentTaylorJet":
        """Square root by Newton iteration (needs even valuation, square leading term)."""
        if self.vshape:
            raise TypeError("only scalar jets have square roots")
        if self.coef.shape[0] == 0 or self.lo % 2:
            raise ValueError("square root needs a nonzero jet of even valuation")
        c0 = self.coef[0, 0]
        root = rational_sqrt(c0) if self.exact else cmath.sqrt(c0)
        start = LaurentTaylorJet.constant(root, self.window, exact=self.exact).shift_s(self.lo // 2)
        y = LaurentTaylorJet(start.coef, start.lo, self.prec - self.lo // 2, self.window)
        half = GaussRat(1, 0) / 2 if self.exact else 0.5
        n = (self.coef.shape[0] * self.window.nr).bit_length() + 2
        for _ in range(n):
            y = (y + self / y) * half
        return y

    def evaluate(self, s: float, r: float = 0.0) -> np.ndarray:
        c = self.coef
        if not self.exact:
            cc = c
        else:
            from .scalars import to_complex
            cc = to_complex(c)
        si = np.array([s ** (self.lo + i) for i in range(c.shape[0])])
        rj = np.array([r ** j for j in range(c.shape[1])])
        return np.tensordot(np.tensordot(si, cc, axes=(0, 0)), rj, axes=(0, 0))

    def __repr__(self):
        return f"LaurentTaylorJet(lo={self.lo}, prec={self.prec}, vshape={self.vshape})"


def _is_exact(value) -> bool:
    if isinstance(value, np.ndarray):
        return value.dtype == object
    return isinstance(value, (GaussRat,)) or type(value).__name__ == "QuadraticNumber"


def _as_coef(x, exact: bool):
    if isinstance(x, np.ndarray):
        return x
    return x


def jet_mul(a: LaurentTaylorJet, b: LaurentTaylorJet) -> LaurentTaylorJet:
    return a * b


def jet_invert(a: LaurentTaylorJet) -> LaurentTaylorJet:
    return a.inverse()
