"""Compact matrix Lie algebras, unitary representations and Standard-Model content.

Algebra elements are handled in basis coordinates (real vectors).  Bases are
chosen with Gaussian-integer entries (i times Pauli / Gell-Mann matrices, with
the eighth Gell-Mann matrix left unnormalized) so that structure constants and
representation images are exact in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

CLOSURE_TOL = 1e-10


class ClosureError(ValueError):
    """A commutator left the span of the basis."""


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Real span of anti-Hermitian matrices with an Ad-invariant inner product."""

    basis: np.ndarray                 # (n, m, m)
    gram: np.ndarray                  # (n, n)
    name: str = "g"
    factors: tuple = ()               # ((name, start, stop), ...)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "gram", np.asarray(self.gram, dtype=float))
        if not self.factors:
            object.__setattr__(self, "factors", ((self.name, 0, b.shape[0]),))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def _realified(self) -> np.ndarray:
        flat = self.basis.reshape(self.dim, -1).T
        return np.vstack([flat.real, flat.imag])

    @cached_property
    def _pinv(self) -> np.ndarray:
        return np.linalg.pinv(self._realified) if self.dim else np.zeros((0, 2 * self.ambient ** 2))

    @cached_property
    def gram_inv(self) -> np.ndarray:
        return np.linalg.inv(self.gram) if self.dim else self.gram

    def matrix(self, x) -> np.ndarray:
        """Ambient matrix of coordinates x (leading batch axes allowed)."""
        return np.tensordot(np.asarray(x), self.basis, axes=(-1, 0))

    def coords(self, M: np.ndarray, check: bool = True) -> np.ndarray:
        """Basis coordinates of an ambient matrix (batch axes allowed)."""
        M = np.asarray(M, dtype=complex)
        lead = M.shape[:-2]
        flat = M.reshape(lead + (-1,))
        v = np.concatenate([flat.real, flat.imag], axis=-1)
        x = v @ self._pinv.T
        if check:
            back = x @ self._realified.T
            err = np.max(np.abs(back - v)) if v.size else 0.0
            scale = max(1.0, float(np.max(np.abs(v))) if v.size else 1.0)
            if err > CLOSURE_TOL * scale:
                raise ClosureError(f"matrix not in the algebra span (residual {err:.2e})")
        return x

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """f[a, b, c] with [e_a, e_b] = f[a, b, c] e_c."""
        e = self.basis
        comm = np.einsum("aij,bjk->abik", e, e) - np.einsum("bij,ajk->abik", e, e)
        return self.coords(comm)

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("...a,...b,abc->...c", np.asarray(x, float), np.asarray(y, float), self.structure_constants)

    def inner(self, x, y):
        return np.einsum("...a,ab,...b->...", np.asarray(x), self.gram, np.asarray(y))

    def ad(self, x) -> np.ndarray:
        """Matrix of y -> [x, y] in coordinates."""
        return np.einsum("a,abc->cb", np.asarray(x, float), self.structure_constants)

    def closure_residual(self) -> float:
        e = self.basis
        comm = np.einsum("aij,bjk->abik", e, e) - np.einsum("bij,ajk->abik", e, e)
        back = self.matrix(self.coords(comm, check=False))
        return float(np.max(np.abs(back - comm))) if self.dim else 0.0

    def adinvariance_residual(self) -> float:
        f = self.structure_constants
        # <[e_z, e_x], e_y> + <e_x, [e_z, e_y]>
        t = np.einsum("zxc,cy->zxy", f, self.gram) + np.einsum("xc,zyc->zxy", self.gram, f)
        return float(np.max(np.abs(t))) if self.dim else 0.0

    def factor_slice(self, name: str) -> slice:
        for n, a, b in self.factors:
            if n == name:
                return slice(a, b)
        raise KeyError(name)


# standard algebras

def _gell_mann() -> list[np.ndarray]:
    out = []
    for i in range(3):
        for j in range(i + 1, 3):
            m = np.zeros((3, 3), complex)
            m[i, j] = m[j, i] = 1
            out.append(m)
            m = np.zeros((3, 3), complex)
            m[i, j], m[j, i] = -1j, 1j
            out.append(m)
    out.append(np.diag([1, -1, 0]).astype(complex))
    out.append(np.diag([1, 1, -2]).astype(complex))
    return out


def _minus_trace_gram(basis: np.ndarray) -> np.ndarray:
    return -np.einsum("aij,bji->ab", basis, basis).real


def su(n: int) -> LieAlgebra:
    """su(2) or su(3) with basis i*sigma_k, i*lambda_a."""
    if n == 2:
        s = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
        basis = 1j * np.array(s, dtype=complex)
    elif n == 3:
        basis = 1j * np.array(_gell_mann())
    else:
        raise ValueError("only su(2) and su(3) are built in")
    return LieAlgebra(basis, _minus_trace_gram(basis), f"su{n}")


def u1() -> LieAlgebra:
    return LieAlgebra(np.array([[[1j]]]), np.eye(1), "u1")


def direct_sum(algs: Sequence[LieAlgebra]) -> LieAlgebra:
    m = sum(a.ambient for a in algs)
    n = sum(a.dim for a in algs)
    basis = np.zeros((n, m, m), complex)
    gram = np.zeros((n, n))
    factors = []
    i = j = 0
    for a in algs:
        basis[i:i + a.dim, j:j + a.ambient, j:j + a.ambient] = a.basis
        gram[i:i + a.dim, i:i + a.dim] = a.gram
        for name, s, e in a.factors:
            factors.append((name, i + s, i + e))
        i += a.dim
        j += a.ambient
    return LieAlgebra(basis, gram, "+".join(a.name for a in algs), tuple(factors))


# representations

@dataclass(frozen=True, eq=False)
class Representation:
    algebra: LieAlgebra
    images: np.ndarray                  # (n, d, d): rho_*(e_a)
    split: tuple | None = None          # (dim V_L, dim V_R)
    labels: tuple = ()                  # per irreducible summand: (label, start, stop)

    def __post_init__(self):
        object.__setattr__(self, "images", np.asarray(self.images, dtype=complex))

    @property
    def dim(self) -> int:
        return self.images.shape[1]

    def of(self, x) -> np.ndarray:
        """rho_*(x) for coordinates x (batch axes allowed)."""
        return np.tensordot(np.asarray(x), self.images, axes=(-1, 0))

    def homomorphism_residual(self) -> float:
        f = self.algebra.structure_constants
        r = self.images
        lhs = np.einsum("abc,cij->abij", f, r)
        rhs = np.einsum("aij,bjk->abik", r, r) - np.einsum("bij,ajk->abik", r, r)
        return float(np.max(np.abs(lhs - rhs))) if r.size else 0.0

    def skew_residual(self) -> float:
        r = self.images
        return float(np.max(np.abs(r + np.conj(np.swapaxes(r, 1, 2))))) if r.size else 0.0

    def split_residual(self) -> float:
        if self.split is None:
            return 0.0
        dl = self.split[0]
        r = self.images
        return float(max(np.max(np.abs(r[:, :dl, dl:]), initial=0), np.max(np.abs(r[:, dl:, :dl]), initial=0)))


def adjoint_rep(alg: LieAlgebra) -> Representation:
    return Representation(alg, np.array([alg.ad(np.eye(alg.dim)[a]) for a in range(alg.dim)], dtype=complex))


def trivial_rep(alg: LieAlgebra, d: int = 1) -> Representation:
    return Representation(alg, np.zeros((alg.dim, d, d), complex))


def fundamental_rep(alg: LieAlgebra) -> Representation:
    return Representation(alg, alg.basis.copy())


def hypercharge_rep(y) -> Representation:
    """u(1) on C with rho_*(i) = 3 y i."""
    y = Fraction(y)
    return Representation(u1(), np.array([[[3j * float(y)]]]))


def outer_tensor(reps: Sequence[Representation], max_dim: int = 4096) -> Representation:
    """Outer tensor product over the direct sum of the factor algebras."""
    dims = [r.dim for r in reps]
    total = int(np.prod(dims))
    if total > max_dim:
        raise ValueError(f"outer tensor dimension {total} exceeds guard {max_dim}")
    alg = direct_sum([r.algebra for r in reps])
    images = []
    for k, r in enumerate(reps):
        for a in range(r.algebra.dim):
            m = np.ones((1, 1), complex)
            for j, d in enumerate(dims):
                m = np.kron(m, r.images[a] if j == k else np.eye(d))
            images.append(m)
    return Representation(alg, np.array(images).reshape(alg.dim, total, total))


def direct_sum_reps(reps: Sequence[Representation], split: tuple | None = None, labels=()) -> Representation:
    alg = reps[0].algebra
    d = sum(r.dim for r in reps)
    images = np.zeros((alg.dim, d, d), complex)
    i = 0
    for r in reps:
        if r.algebra.dim != alg.dim:
            raise ValueError("summands act on different algebras")
        images[:, i:i + r.dim, i:i + r.dim] = r.images
        i += r.dim
    return Representation(alg, images, split, tuple(labels))


# centre and hypercharge tests

@dataclass(frozen=True)
class CenterBasis:
    algebra: LieAlgebra
    elements: np.ndarray = field(repr=False)   # (k, n) coordinates, Gram-orthonormal

    @property
    def dim(self) -> int:
        return self.elements.shape[0]


def _null_space(M: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    if M.shape[1] == 0:
        return np.zeros((0, 0))
    if M.shape[0] == 0:
        return np.eye(M.shape[1])
    u, s, vh = np.linalg.svd(M)
    tol = rtol * max(1.0, s[0] if s.size else 1.0)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def center(alg: LieAlgebra) -> CenterBasis:
    f = alg.structure_constants
    M = np.transpose(f, (0, 2, 1)).reshape(-1, alg.dim)
    ns = _null_space(M)
    if ns.shape[1] == 0:
        return CenterBasis(alg, np.zeros((0, alg.dim)))
    # Gram-orthonormalize
    G = ns.T @ alg.gram @ ns
    L = np.linalg.cholesky(G)
    el = (ns @ np.linalg.inv(L).T).T
    # fix sign so the first nonzero coordinate is positive
    for row in el:
        k = np.flatnonzero(np.abs(row) > 1e-12)[0]
        if row[k] < 0:
            row *= -1
    return CenterBasis(alg, el)


@dataclass(frozen=True)
class HyperchargeResult:
    hypercharged: bool
    witness: np.ndarray | None
    det: complex

    def __bool__(self):
        return self.hypercharged


def is_hypercharged(rep: Representation, samples: int = 8, seed: int = 0, tol: float = 1e-10) -> HyperchargeResult:
    z = center(rep.algebra)
    if rep.dim == 0:
        return HyperchargeResult(True, None, 1.0)
    cands = list(z.elements)
    if z.dim:
        rng = np.random.default_rng(seed)
        cands += list(rng.normal(size=(samples, z.dim)) @ z.elements)
    best = 0.0
    for x in cands:
        det = np.linalg.det(rep.of(x))
        if abs(det) >= tol:
            return HyperchargeResult(True, np.asarray(x), complex(det))
        best = max(best, abs(det))
    return HyperchargeResult(False, None, complex(best))


def center_kernel_intersection(rep: Representation) -> int:
    z = center(rep.algebra)
    if z.dim == 0:
        return 0
    imgs = np.einsum("kb,bij->kij", z.elements, rep.images).reshape(z.dim, -1).T
    M = np.vstack([imgs.real, imgs.imag])
    return _null_space(M).shape[1]


# Standard Model

@dataclass(frozen=True)
class Multiplet:
    name: str
    color: int        # 1 or 3
    weak: int         # 1 or 2
    y: Fraction
    chirality: str    # "L" or "R"

    @property
    def dim(self) -> int:
        return self.color * self.weak


DEFAULT_GENERATION = (
    Multiplet("Q", 3, 2, Fraction(1, 6), "L"),
    Multiplet("L", 1, 2, Fraction(-1, 2), "L"),
    Multiplet("u", 3, 1, Fraction(2, 3), "R"),
    Multiplet("d", 3, 1, Fraction(-1, 3), "R"),
    Multiplet("e", 1, 1, Fraction(-1), "R"),
)

NEUTRINO_SINGLET = Multiplet("nu", 1, 1, Fraction(0), "R")


def parse_generation_table(rows) -> tuple[Multiplet, ...]:
    out = []
    for i, row in enumerate(rows):
        try:
            m = Multiplet(str(row["name"]), int(row["color"]), int(row["weak"]),
                          Fraction(str(row["y"])), str(row["chirality"]).upper())
        except (KeyError, ValueError, TypeError) as exc:
            raise ValueError(f"malformed generation table row {i}: {exc}") from None
        if m.color not in (1, 3) or m.weak not in (1, 2) or m.chirality not in ("L", "R"):
            raise ValueError(f"malformed generation table row {i}: {row}")
        out.append(m)
    return tuple(out)


def sm_algebra() -> LieAlgebra:
    return direct_sum([su(3), su(2), u1()])


def multiplet_rep(m: Multiplet) -> Representation:
    s3, s2 = su(3), su(2)
    return outer_tensor([
        fundamental_rep(s3) if m.color == 3 else trivial_rep(s3),
        fundamental_rep(s2) if m.weak == 2 else trivial_rep(s2),
        hypercharge_rep(m.y),
    ])


@dataclass(frozen=True)
class StandardModelContent:
    algebra: LieAlgebra
    higgs: Representation
    fermions: Representation

    @property
    def u1_generator(self) -> np.ndarray:
        x = np.zeros(self.algebra.dim)
        x[self.algebra.factor_slice("u1")] = 1.0
        return x


def standard_model_content(table: Sequence[Multiplet] = DEFAULT_GENERATION, generations: int = 3,
                           n_y: int = 3) -> StandardModelContent:
    if not table:
        raise ValueError("empty generation table")
    alg = sm_algebra()
    higgs = outer_tensor([trivial_rep(su(3)), fundamental_rep(su(2)), hypercharge_rep(Fraction(n_y, 3))])
    left = [m for m in table if m.chirality == "L"] * generations
    right = [m for m in table if m.chirality == "R"] * generations
    reps, labels, i = [], [], 0
    for m in left + right:
        reps.append(multiplet_rep(m))
        labels.append((f"{m.name}_{m.chirality}", i, i + m.dim))
        i += m.dim
    dl = sum(m.dim for m in left)
    fermions = direct_sum_reps(reps, split=(dl, i - dl), labels=labels)
    return StandardModelContent(alg, higgs, fermions)


def summand_dets(rep: Representation, x) -> list[tuple[str, complex]]:
    """det of rho_*(x) restricted to each labelled irreducible summand."""
    M = rep.of(x)
    return [(lab, complex(np.linalg.det(M[a:b, a:b]))) for lab, a, b in rep.labels]
