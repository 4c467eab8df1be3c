"""Differential forms on Minkowski space with polynomial, tensor-valued components.

A k-form is a ``SpacetimePoly`` whose value shape starts with k axes of size
4, holding the fully antisymmetric components alpha_{mu1..muk}; the remaining
axes are the values (Lie algebra coordinates, W-vectors, twisted spinors...).

Conventions: alpha = (1/k!) alpha_{mu..} dx^mu.., so (dx^0 ^ dx^1)_{01} = 1.
The wedge product is (a ^ b) = (1/(k! l!)) Alt(a (x) b), the volume form is
dvol = dx^0^dx^1^dx^2^dx^3 with eps_{0123} = +1, and
(*a)_{nu..} = (1/k!) a^{mu..} eps_{mu.. nu..}, giving *1 = dvol and *dvol = -1.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable

import numpy as np

from ..mathkit.poly import DIM, SpacetimePoly

METRIC = np.array([-1.0, 1.0, 1.0, 1.0])

Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _parity(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _signed_perms(k: int):
    return tuple((p, _parity(p)) for p in permutations(range(k)))


@lru_cache(maxsize=None)
def levi_civita() -> np.ndarray:
    eps = np.zeros((DIM,) * DIM)
    for p, s in _signed_perms(DIM):
        eps[p] = s
    return eps


def antisymmetrize(c: np.ndarray, k: int, offset: int = 1) -> np.ndarray:
    """Sum over permutations (with sign) of k axes starting at ``offset``."""
    return _signed_sum(c, _signed_perms(k), k, offset)


@lru_cache(maxsize=None)
def _shuffles(k: int, l: int):
    """(k, l)-shuffles: permutations keeping the first k and last l slots ordered."""
    out = []
    for p, s in _signed_perms(k + l):
        if list(p[:k]) == sorted(p[:k]) and list(p[k:]) == sorted(p[k:]):
            out.append((p, s))
    return tuple(out)


def shuffle_antisymmetrize(c: np.ndarray, k: int, l: int, offset: int = 1) -> np.ndarray:
    """Alt of a tensor already antisymmetric in its first k and last l form axes,
    divided by k! l! (so the sum runs over shuffles only)."""
    return _signed_sum(c, _shuffles(k, l), k + l, offset)


def _signed_sum(c, perms, k, offset):
    if k <= 1:
        return c
    out = np.zeros_like(c)
    base = list(range(c.ndim))
    for p, s in perms:
        # axis j of the result is axis p^-1(j) of the input
        inv = np.argsort(p)
        axes = base[:offset] + [offset + int(q) for q in inv] + base[offset + k:]
        t = np.transpose(c, axes)
        if s > 0:
            out += t
        else:
            out -= t
    return out


def _raise(c: np.ndarray, k: int, offset: int = 1) -> np.ndarray:
    for j in range(k):
        shape = [1] * c.ndim
        shape[offset + j] = DIM
        c = c * METRIC.reshape(shape)
    return c


class Form:
    """A k-form with polynomial components."""

    __slots__ = ("poly", "degree")

    def __init__(self, poly: SpacetimePoly, degree: int):
        if degree not in range(DIM + 1):
            raise ValueError(f"invalid form degree {degree}")
        if tuple(poly.vshape[:degree]) != (DIM,) * degree:
            raise ValueError(f"value shape {poly.vshape} cannot carry a {degree}-form")
        self.poly = poly
        self.degree = degree

    @classmethod
    def zero(cls, degree: int, value_shape=()):
        return cls(SpacetimePoly.zero((DIM,) * degree + tuple(value_shape)), degree)

    @classmethod
    def scalar(cls, poly: SpacetimePoly):
        return cls(poly, 0)

    @property
    def value_shape(self) -> tuple:
        return self.poly.vshape[self.degree:]

    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if other.degree != self.degree or other.value_shape != self.value_shape:
            raise ValueError("forms of different degree or value shape")

    def __add__(self, other):
        if isinstance(other, (int, float)) and other == 0:
            return self
        self._check(other)
        return Form(self.poly + other.poly, self.degree)

    __radd__ = __add__

    def __sub__(self, other):
        self._check(other)
        return Form(self.poly - other.poly, self.degree)

    def __neg__(self):
        return Form(-self.poly, self.degree)

    def __mul__(self, c):
        return Form(self.poly * c, self.degree)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Form(self.poly / c, self.degree)

    def map_values(self, fn: Callable[[np.ndarray], np.ndarray]) -> "Form":
        """Apply a pointwise linear map on the value axes."""
        return Form(self.poly.map(fn), self.degree)

    def truncate(self, max_degree: int) -> "Form":
        return Form(self.poly.truncate(max_degree), self.degree)

    def __call__(self, points) -> np.ndarray:
        return self.poly(points)

    def d(self) -> "Form":
        return exterior_d(self)

    def star(self) -> "Form":
        return hodge_star(self)

    def __repr__(self):
        return f"Form(degree={self.degree}, values={self.value_shape}, terms={self.poly.nterms})"


def tensor(a: Form, b: Form, fn: Kernel, max_degree: int | None = None) -> SpacetimePoly:
    """Unsymmetrized product: form axes of ``a`` then ``b``, then fn's values."""
    k, l = a.degree, b.degree
    va = a.value_shape

    def lifted(x, y):
        x = x.reshape(x.shape[:2 + k] + (1,) * l + va)
        y = y.reshape(y.shape[:2] + (1,) * k + y.shape[2:])
        return fn(x, y)

    return a.poly.bilinear(b.poly, lifted, max_degree)


def wedge(a: Form, b: Form, fn: Kernel = np.multiply, max_degree: int | None = None) -> Form:
    k, l = a.degree, b.degree
    if k + l > DIM:
        return Form.zero(DIM, _probe(a, b, fn))
    t = tensor(a, b, fn, max_degree)
    return Form(t.map(lambda c: shuffle_antisymmetrize(c, k, l)), k + l)


def _probe(a: Form, b: Form, fn: Kernel) -> tuple:
    out = np.asarray(fn(np.zeros((1, 1) + a.value_shape, complex), np.zeros((1, 1) + b.value_shape, complex)))
    return out.shape[2:]


def contract(a: Form, b: Form, fn: Kernel = np.multiply) -> SpacetimePoly:
    """Metric pairing (1/k!) a_{mu..} b^{mu..}, values combined by ``fn``."""
    if a.degree != b.degree:
        raise ValueError("pairing needs equal degrees")
    k = a.degree
    bup = Form(b.poly.map(lambda c: _raise(c, k)), k)

    def lifted(x, y):
        prod = np.asarray(fn(x, y))
        return prod.sum(axis=tuple(range(2, 2 + k))) if k else prod

    return a.poly.bilinear(bup.poly, lifted) / factorial(k)


def exterior_d(a: Form) -> Form:
    k = a.degree
    if k == DIM:
        return Form.zero(DIM, a.value_shape)
    g = a.poly.gradient()
    return Form(g.map(lambda c: shuffle_antisymmetrize(c, 1, k)), k + 1)


def hodge_star(a: Form) -> Form:
    k = a.degree
    eps = levi_civita()
    nv = len(a.value_shape)

    def star(c):
        up = _raise(c, k)
        out = np.tensordot(up, eps, axes=(list(range(1, k + 1)), list(range(k))))
        # out: (T, *values, *nu-axes); move the form axes to the front
        out = np.moveaxis(out, list(range(1 + nv, out.ndim)), list(range(1, 1 + DIM - k)))
        return out / factorial(k)

    return Form(a.poly.map(star), DIM - k)


def codifferential(a: Form) -> Form:
    """d* = * d *, computed as the divergence (d* a)_{nu..} = -d^mu a_{mu nu..}."""
    k = a.degree
    if k == 0:
        return Form.zero(0, a.value_shape)
    out = None
    for mu in range(DIM):
        term = a.poly[mu].derive(mu) * (-METRIC[mu])
        out = term if out is None else out + term
    return Form(out, k - 1)


def codifferential_via_star(a: Form) -> Form:
    """The literal composition * d * (slower; used as a cross-check)."""
    if a.degree == 0:
        return Form.zero(0, a.value_shape)
    return hodge_star(exterior_d(hodge_star(a)))


def interior(A: Form, a: Form, fn: Kernel) -> Form:
    """(i_A a)_{nu..} = A^mu . a_{mu nu..} with values combined by ``fn``."""
    if A.degree != 1:
        raise ValueError("interior product needs a 1-form")
    k = a.degree
    if k == 0:
        return Form.zero(0, _probe(Form(A.poly[0], 0), a, fn))
    Aup = A.poly.map(lambda c: _raise(c, 1))

    def lifted(x, y):
        # x: (na, 1, 4, *vA); y: (1, nb, 4, ..., *vb)
        x = x.reshape(x.shape[:3] + (1,) * (k - 1) + x.shape[3:])
        return np.asarray(fn(x, y)).sum(axis=2)

    return Form(Aup.bilinear(a.poly, lifted), k - 1)


def covariant_d(A: Form | None, a: Form, act: Kernel) -> Form:
    """d_A a = d a + A ^ a, the value action of A given by ``act``."""
    out = exterior_d(a)
    if A is None or a.degree == DIM:
        return out
    return out + wedge(A, a, act)


def covariant_codiff(A: Form | None, a: Form, act: Kernel) -> Form:
    """d_A^* = * d_A *, using *(A ^ *a) = -i_A a."""
    if a.degree == 0:
        return Form.zero(0, a.value_shape)
    out = codifferential(a)
    if A is None:
        return out
    return out - interior(A, a, act)


def one_form(components) -> Form:
    """Assemble a 1-form from four polys of equal value shape."""
    from ..mathkit.poly import stack
    return Form(stack(list(components), axis=0), 1)


def component(a: Form, *idx: int) -> SpacetimePoly:
    return a.poly[tuple(idx)]
