"""
Gamma matrices, the spinor pairing and Clifford multiplication
==============================================================

A short walk through the Clifford layer: the gamma matrices in exact
arithmetic, the Hermitian pairing used throughout, and why the pairing
matrix matters.
"""

import numpy as np

from smspin import clifford as cl

# the four gamma matrices, with entries in the Gaussian rationals
G = cl.gamma_set(exact=True)
print("Gamma_1 =")
print(G.lower[1])

# {Gamma_a, Gamma_b} = 2 g_ab, checked entry by entry without rounding
ok = all(np.all(G.lower[a] @ G.lower[b] + G.lower[b] @ G.lower[a] == 2 * cl.METRIC[a] * (a == b) * np.eye(4))
         for a in range(4) for b in range(4))
print("anticommutator exact:", ok)

# X . X . psi = -g(X, X) psi for Clifford multiplication X . psi = i X^a Gamma_a psi
X = np.array([0.3, -1.2, 0.5, 2.0])
psi = np.array([1, 2j, -1, 0.5])
lhs = cl.clifford_mult(X, cl.clifford_mult(X, psi))
print("X.X.psi + g(X,X) psi =", np.abs(lhs + cl.minkowski_dot(X, X) * psi).max())

# the pairing: Clifford multiplication by real vectors is skew-adjoint for it
rng = np.random.default_rng(0)
phi, chi = rng.normal(size=(2, 4)) + 1j * rng.normal(size=(2, 4))
skew = cl.dirac_form(cl.clifford_mult(X, phi), chi) + cl.dirac_form(phi, cl.clifford_mult(X, chi))
print("<X.phi, chi> + <phi, X.chi> =", abs(skew))

# the other Hermitian candidate makes it self-adjoint instead
J0 = cl.printed_dirac_matrix()
bad = (cl.dirac_form(cl.clifford_mult(X, phi), chi, J0) + cl.dirac_form(phi, cl.clifford_mult(X, chi), J0))
print("same sum with the alternative matrix:", abs(bad))

# a vector with g(u, u) != 0 can be divided out again
u = np.array([1.0, 0.2, 0.0, 0.0])
print("round trip:", np.allclose(cl.invert_clifford(u, cl.clifford_mult(u, psi)), psi))
