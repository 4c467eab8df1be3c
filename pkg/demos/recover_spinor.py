"""
Reading a spinor field off three-fold measurements
==================================================

A hidden spinor field psi and a known constant U(1) connection generate
simulated measurements of the three-fold interaction.  We invert the chain
at a few points inside the diamond and compare with the truth.
"""

import numpy as np

from smspin.fieldtheory import Form, abelian_model
from smspin.mathkit import SpacetimePoly
from smspin.recovery import MeasurementOracle, RecoverySettings, default_grid, recover_field, seeded_spinor

model = abelian_model()                       # u(1) acting by 3i on C^1 + C^1
psi = seeded_spinor(model, np.random.default_rng(3), degree=2)
A = Form(SpacetimePoly.constant(np.array([[0.3], [0.2], [-0.1], [0.4]], complex)), 1)

oracle = MeasurementOracle(model, psi, A, nodes=16, steps=100)
points = default_grid(2, 3)
print(points)

for seq in [(1 / 8, 1 / 16), (1 / 8, 1 / 16, 1 / 32)]:
    rep = recover_field(points, oracle, A, RecoverySettings(seq))
    print(f"s sequence {seq}: max relative error {rep.max_relative_error:.2e}, "
          f"unreachable {len(rep.unreachable)}")

# a point near the tip of the diamond cannot be reached by probes of size < eps0
far = recover_field(np.array([[0.9, 0.05, 0.0, 0.0]]), oracle, A)
print(far.unreachable[0]["reason"])
