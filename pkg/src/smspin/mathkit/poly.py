"""Polynomials on R^4 with tensor-valued coefficients.

A ``SpacetimePoly`` is a finite sum of monomials x^e (e a multi-index over
x^0..x^3) times coefficient arrays of a fixed value shape.  Terms are kept
merged, so exponents are unique.  Products are generic: any bilinear map on
coefficient arrays that broadcasts over leading axes can be used, which is how
matrix products, Lie brackets, Clifford actions and pairings are all lifted to
fields.
"""
from __future__ import annotations

from math import comb
from typing import Callable, Iterable, Sequence

import numpy as np

DIM = 4


def _merge(exps: np.ndarray, coefs: np.ndarray):
    if exps.shape[0] == 0:
        return exps.reshape(0, DIM).astype(np.int64), coefs
    base = int(exps.max()) + 1
    keys = ((exps[:, 0] * base + exps[:, 1]) * base + exps[:, 2]) * base + exps[:, 3]
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    if starts.size == keys.size:
        uniq, out = exps[order], coefs[order]
    else:
        uniq = exps[order[starts]]
        out = np.add.reduceat(coefs[order], starts, axis=0)
    flat = out.reshape(out.shape[0], -1)
    keep = np.any(flat != 0, axis=1) if flat.shape[1] else np.zeros(out.shape[0], bool)
    return uniq[keep].astype(np.int64), out[keep]


class SpacetimePoly:
    """Sum_t coefs[t] * x^exps[t]; coefficient arrays share ``vshape``."""

    __slots__ = ("exps", "coefs", "vshape")

    def __init__(self, exps, coefs, vshape: tuple | None = None, merged: bool = False):
        exps = np.asarray(exps, dtype=np.int64).reshape(-1, DIM)
        coefs = np.asarray(coefs)
        if coefs.dtype != object:
            coefs = coefs.astype(complex)
        if vshape is None:
            vshape = tuple(coefs.shape[1:])
        coefs = coefs.reshape((exps.shape[0],) + tuple(vshape))
        if (exps < 0).any():
            raise ValueError("negative exponent")
        if not merged:
            exps, coefs = _merge(exps, coefs)
        self.exps = exps
        self.coefs = coefs
        self.vshape = tuple(vshape)

    # construction
    @classmethod
    def zero(cls, vshape=()):
        return cls(np.zeros((0, DIM), np.int64), np.zeros((0,) + tuple(vshape), complex), vshape, merged=True)

    @classmethod
    def constant(cls, value):
        value = np.asarray(value, dtype=complex)
        return cls(np.zeros((1, DIM), np.int64), value[None], value.shape)

    @classmethod
    def monomial(cls, exp: Sequence[int], value):
        value = np.asarray(value, dtype=complex)
        return cls(np.asarray(exp)[None], value[None], value.shape)

    @classmethod
    def coordinate(cls, axis: int, vshape=()):
        e = np.zeros(DIM, np.int64)
        e[axis] = 1
        return cls(e[None], np.ones((1,) + tuple(vshape), complex), vshape)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Sequence[int], object]], vshape=()):
        terms = list(terms)
        if not terms:
            return cls.zero(vshape)
        exps = np.array([t[0] for t in terms], dtype=np.int64)
        coefs = np.array([np.broadcast_to(np.asarray(t[1], complex), vshape) for t in terms])
        return cls(exps, coefs, vshape)

    @classmethod
    def random(cls, rng: np.random.Generator, degree: int, vshape=(), scale: float = 1.0, density: float = 1.0):
        exps = [e for e in all_exponents(degree)]
        exps = [e for e in exps if rng.random() < density] or [exps[0]]
        shape = (len(exps),) + tuple(vshape)
        c = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        return cls(np.array(exps), scale * c / np.sqrt(len(exps)), vshape)

    # basic structure
    @property
    def nterms(self) -> int:
        return self.exps.shape[0]

    @property
    def degree(self) -> int:
        return int(self.exps.sum(axis=1).max()) if self.nterms else -1

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.nterms == 0 or bool(np.all(np.abs(self.coefs) <= tol))

    def copy_with(self, coefs, vshape=None) -> "SpacetimePoly":
        return SpacetimePoly(self.exps, coefs, vshape, merged=False)

    # linear structure
    def __add__(self, other):
        if not isinstance(other, SpacetimePoly):
            other = SpacetimePoly.constant(np.broadcast_to(np.asarray(other, complex), self.vshape))
        if other.vshape != self.vshape:
            raise ValueError(f"value shapes differ: {self.vshape} vs {other.vshape}")
        return SpacetimePoly(np.vstack([self.exps, other.exps]), np.concatenate([self.coefs, other.coefs]), self.vshape)

    __radd__ = __add__

    def __neg__(self):
        return SpacetimePoly(self.exps, -self.coefs, self.vshape, merged=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, SpacetimePoly):
            return self.bilinear(c, lambda a, b: a * b)
        return SpacetimePoly(self.exps, self.coefs * c, self.vshape)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return SpacetimePoly(self.exps, self.coefs / c, self.vshape, merged=True)

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "SpacetimePoly":
        """Apply a linear map to the coefficient array (leading axis = terms)."""
        out = np.asarray(fn(self.coefs))
        return SpacetimePoly(self.exps, out, out.shape[1:])

    def real(self) -> "SpacetimePoly":
        # valid because monomials are real on real points
        return self.map(np.real)

    def conj(self) -> "SpacetimePoly":
        return self.map(np.conj)

    def __getitem__(self, idx) -> "SpacetimePoly":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.map(lambda c: c[(slice(None),) + idx])

    # products
    def bilinear(self, other: "SpacetimePoly", fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
                 max_degree: int | None = None) -> "SpacetimePoly":
        """Product through ``fn(a, b)``; fn must broadcast over leading axes."""
        na, nb = self.nterms, other.nterms
        if na == 0 or nb == 0:
            probe = np.asarray(fn(np.zeros((1, 1) + self.vshape, complex), np.zeros((1, 1) + other.vshape, complex)))
            return SpacetimePoly.zero(probe.shape[2:])
        ca = self.coefs.reshape((na, 1) + self.vshape)
        cb = other.coefs.reshape((1, nb) + other.vshape)
        prod = np.asarray(fn(ca, cb))
        vshape = prod.shape[2:]
        exps = (self.exps[:, None, :] + other.exps[None, :, :]).reshape(-1, DIM)
        prod = prod.reshape((na * nb,) + vshape)
        if max_degree is not None:
            keep = exps.sum(axis=1) <= max_degree
            exps, prod = exps[keep], prod[keep]
        return SpacetimePoly(exps, prod, vshape)

    def truncate(self, max_degree: int) -> "SpacetimePoly":
        keep = self.exps.sum(axis=1) <= max_degree
        return SpacetimePoly(self.exps[keep], self.coefs[keep], self.vshape, merged=True)

    # calculus
    def derive(self, axis: int) -> "SpacetimePoly":
        if not 0 <= axis < DIM:
            raise ValueError("axis must be in 0..3")
        e = self.exps[:, axis]
        keep = e > 0
        exps = self.exps[keep].copy()
        factor = e[keep].astype(float)
        exps[:, axis] -= 1
        coefs = self.coefs[keep] * factor.reshape((-1,) + (1,) * len(self.vshape))
        return SpacetimePoly(exps, coefs, self.vshape, merged=True)

    def gradient(self) -> "SpacetimePoly":
        """Stack of partial derivatives; new leading value axis of size 4."""
        parts = [self.derive(a) for a in range(DIM)]
        exps, coefs = [], []
        for a, p in enumerate(parts):
            if p.nterms:
                c = np.zeros((p.nterms, DIM) + self.vshape, complex)
                c[:, a] = p.coefs
                exps.append(p.exps)
                coefs.append(c)
        if not exps:
            return SpacetimePoly.zero((DIM,) + self.vshape)
        return SpacetimePoly(np.vstack(exps), np.concatenate(coefs), (DIM,) + self.vshape)

    def shift(self, x0: Sequence[float]) -> "SpacetimePoly":
        """Re-expand about x0: returns q with q(u) = p(x0 + u)."""
        x0 = np.asarray(x0, dtype=float)
        out_e, out_c = [], []
        for e, c in zip(self.exps, self.coefs):
            ranges = [range(k + 1) for k in e]
            for sub in np.array(np.meshgrid(*ranges, indexing="ij")).reshape(DIM, -1).T:
                w = 1.0
                for a in range(DIM):
                    w *= comb(int(e[a]), int(sub[a])) * x0[a] ** (e[a] - sub[a])
                out_e.append(sub)
                out_c.append(w * c)
        if not out_e:
            return SpacetimePoly.zero(self.vshape)
        return SpacetimePoly(np.array(out_e), np.array(out_c), self.vshape)

    # evaluation
    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = pts.reshape(-1, DIM)
        if self.nterms == 0:
            out = np.zeros((pts.shape[0],) + self.vshape, complex)
        else:
            deg = int(self.exps.max())
            pw = pts[:, :, None] ** np.arange(deg + 1)[None, None, :]
            mon = np.ones((pts.shape[0], self.nterms))
            for a in range(DIM):
                mon *= pw[:, a, self.exps[:, a]]
            c = self.coefs.reshape(self.nterms, -1)
            if c.dtype == object:
                out = (mon.astype(object) @ c).reshape((pts.shape[0],) + self.vshape)
            else:
                # two real BLAS products are much faster than one mixed float/complex product
                out = (mon @ c.real + 1j * (mon @ c.imag)).reshape((pts.shape[0],) + self.vshape)
        return out[0] if single else out

    def __repr__(self):
        return f"SpacetimePoly(terms={self.nterms}, degree={self.degree}, vshape={self.vshape})"


def all_exponents(degree: int):
    """Multi-indices over four variables with total degree <= degree, graded order."""
    out = []
    for tot in range(degree + 1):
        for a in range(tot + 1):
            for b in range(tot - a + 1):
                for c in range(tot - a - b + 1):
                    out.append((a, b, c, tot - a - b - c))
    return out


def poly_derive(p: SpacetimePoly, axis: int) -> SpacetimePoly:
    return p.derive(axis)


def stack(polys: Sequence[SpacetimePoly], axis: int = 0) -> SpacetimePoly:
    """Stack polys of equal vshape along a new value axis."""
    vshape = polys[0].vshape
    n = len(polys)
    exps, coefs = [], []
    for i, p in enumerate(polys):
        if p.vshape != vshape:
            raise ValueError("stack needs equal value shapes")
        if p.nterms:
            c = np.zeros((p.nterms, n) + vshape, complex)
            c[:, i] = p.coefs
            exps.append(p.exps)
            coefs.append(np.moveaxis(c, 1, 1 + axis))
    shape = list(vshape)
    shape.insert(axis, n)
    if not exps:
        return SpacetimePoly.zero(tuple(shape))
    return SpacetimePoly(np.vstack(exps), np.concatenate(coefs), tuple(shape))
