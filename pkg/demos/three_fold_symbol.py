"""
Three colliding waves and the small-angle limit
===============================================

Three incoming light rays meet at the origin and produce an outgoing ray.
The Dirac part of the interaction symbol N(s, r) depends on two angles.
Here we expand it exactly in r for a few values of s, and watch the
rescaled residual E(s) shrink linearly.
"""

from fractions import Fraction

import numpy as np

from smspin.microlocal import (asymptotic_identity_certificate, build_geometry, kappa, numeric_residual,
                               random_inputs, residual_at)

# an exactly rational geometry: r = 3/5, s = 4/5
geo = build_geometry([0, 0, 0, 0], Fraction(1, 10), Fraction(3, 5), Fraction(4, 5))
print("kappa =", kappa(Fraction(3, 5), Fraction(4, 5)))
print("invariants hold:", all(geo.invariant_residuals().values()))

# hypercharge 3i on a two-dimensional internal space and small integer ray transforms
b, I1, dI2, dI3 = random_inputs(np.random.default_rng(1))

for s in (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32)):
    E = residual_at(b, I1, dI2, dI3, s)[0]
    print(f"s = {s}:  |E(s)| = {np.linalg.norm(E):.6e}   |E(s)|/s = {np.linalg.norm(E) / float(s):.4f}")

# the same quantity from point evaluations only (contour integral in r, 30 digits)
s = Fraction(1, 16)
gap = np.linalg.norm(numeric_residual(b, I1, dI2, dI3, s) - residual_at(b, I1, dI2, dI3, s)[0])
print("jet vs contour at s = 1/16:", f"{gap:.2e}")

# the whole certificate, including the exact check of the two closed-form blocks
cert = asymptotic_identity_certificate(b, I1, dI2, dI3, numeric=False)
print("ratios:", [round(q, 4) for q in cert.ratios], " slope:", round(cert.slope, 3))
print("blocks match:", cert.blocks["match"], " passed:", cert.passed)
