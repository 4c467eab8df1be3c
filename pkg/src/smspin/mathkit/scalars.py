"""Exact scalar types: Gaussian rationals and a real quadratic extension.

Both types interoperate with Python ints, ``fractions.Fraction`` and
``gmpy2.mpq``.  Mixing with floats raises, so an exact computation never
degrades silently.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import gmpy2
import numpy as np

mpq = gmpy2.mpq
_RATIONAL = (int, Fraction, type(mpq(0)), type(gmpy2.mpz(0)))


def _q(x):
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, _RATIONAL) or isinstance(x, Rational):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


class GaussRat:
    """Element of Q(i) stored as a pair of ``mpq``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def coerce(x):
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, complex):
            raise TypeError("float complex cannot enter exact arithmetic")
        return GaussRat(x, 0)

    def __add__(self, o):
        if isinstance(o, (QuadraticNumber, np.ndarray)):
            return NotImplemented
        o = GaussRat.coerce(o)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, (QuadraticNumber, np.ndarray)):
            return NotImplemented
        o = GaussRat.coerce(o)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        if isinstance(o, np.ndarray):
            return NotImplemented
        return GaussRat.coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, (QuadraticNumber, np.ndarray)):
            return NotImplemented
        if isinstance(o, GaussRat):
            return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        q = _q(o)
        return GaussRat(self.re * q, self.im * q)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, (QuadraticNumber, np.ndarray)):
            return NotImplemented
        o = GaussRat.coerce(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussRat((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, o):
        if isinstance(o, np.ndarray):
            return NotImplemented
        return GaussRat.coerce(o) / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("integer powers only")
        if n < 0:
            return GaussRat(1) / (self ** (-n))
        out, base = GaussRat(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __eq__(self, o):
        if isinstance(o, QuadraticNumber):
            return o == self
        try:
            o = GaussRat.coerce(o)
        except TypeError:
            return complex(self) == o
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"{self.re}"
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


class _Defer(Exception):
    pass


def _defer(fn):
    def wrapped(self, o):
        try:
            return fn(self, o)
        except _Defer:
            return NotImplemented
    wrapped.__name__ = fn.__name__
    return wrapped


class QuadraticNumber:
    """a + b*sqrt(d) with a, b in Q(i) and d a positive non-square rational."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = GaussRat.coerce(a)
        self.b = GaussRat.coerce(b)
        self.d = _q(d)

    @classmethod
    def sqrt_of(cls, d):
        return cls(0, 1, d)

    def _lift(self, o):
        if isinstance(o, np.ndarray):
            raise _Defer
        if isinstance(o, QuadraticNumber):
            if o.d != self.d:
                raise ValueError("mixing different quadratic extensions")
            return o
        return QuadraticNumber(GaussRat.coerce(o), 0, self.d)

    @_defer
    def __add__(self, o):
        o = self._lift(o)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    @_defer
    def __sub__(self, o):
        o = self._lift(o)
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.d)

    @_defer
    def __rsub__(self, o):
        return self._lift(o) - self

    @_defer
    def __mul__(self, o):
        o = self._lift(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    @_defer
    def __truediv__(self, o):
        o = self._lift(o)
        n = o.a * o.a - o.b * o.b * self.d
        if not n:
            raise ZeroDivisionError("division by zero in quadratic extension")
        num = self * QuadraticNumber(o.a, -o.b, self.d)
        return QuadraticNumber(num.a / n, num.b / n, self.d)

    @_defer
    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def conjugate(self):
        return QuadraticNumber(self.a.conjugate(), self.b.conjugate(), self.d)

    def __eq__(self, o):
        try:
            o = self._lift(o)
        except (TypeError, ValueError):
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __complex__(self):
        return complex(_surd_float(self.a.re, self.b.re, self.d), _surd_float(self.a.im, self.b.im, self.d))

    def __repr__(self):
        return f"({self.a!r} + {self.b!r}*sqrt({self.d}))"


def _surd_float(p, q, d) -> float:
    """float(p + q sqrt(d)) without cancellation: opposite signs go through the conjugate."""
    if not q:
        return float(p)
    root = float(gmpy2.sqrt(d))
    if not p or (p > 0) == (q > 0):
        return float(p) + float(q) * root
    return float(p * p - q * q * d) / (float(p) - float(q) * root)


def gauss(re, im=0) -> GaussRat:
    return GaussRat(re, im)


I_EXACT = GaussRat(0, 1)


def exact_array(a) -> np.ndarray:
    """Object array of GaussRat from an array of ints/Fractions/GaussRat."""
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = v if isinstance(v, (GaussRat, QuadraticNumber)) else GaussRat.coerce(v)
    return out


def to_complex(a) -> np.ndarray | complex:
    """Convert exact scalars or object arrays to complex floats."""
    if isinstance(a, np.ndarray):
        if a.dtype != object:
            return a.astype(complex)
        out = np.empty(a.shape, dtype=complex)
        for idx, v in np.ndenumerate(a):
            out[idx] = complex(v)
        return out
    return complex(a)


def rational_sqrt(x):
    """Exact square root of a non-negative rational perfect square, else ValueError."""
    if isinstance(x, GaussRat):
        if x.im:
            raise ValueError("complex square root not supported exactly")
        x = x.re
    q = _q(x)
    if q < 0:
        raise ValueError("negative radicand")
    n, d = gmpy2.mpz(q.numerator), gmpy2.mpz(q.denominator)
    if not (gmpy2.is_square(n) and gmpy2.is_square(d)):
        raise ValueError(f"{q} is not a rational square")
    return GaussRat(mpq(gmpy2.isqrt(n), gmpy2.isqrt(d)))


def is_zero(x) -> bool:
    if isinstance(x, np.ndarray):
        if x.dtype == object:
            return not any(bool(v) for v in x.flat)
        return not np.any(x)
    return not x
