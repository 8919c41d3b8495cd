"""
Skew information of a single qubit
==================================

The skew information measures how much a state fails to commute with a
conserved quantity. It vanishes for states diagonal in the energy basis and
equals the energy variance on pure states.
"""

import numpy as np

from skewasym import sld, skew_value, variance, wigner_yanase, wy_direct, wyd

n = np.diag([0.0, 1.0])
plus = np.array([1.0, 1.0]) / np.sqrt(2)
rho_plus = np.outer(plus, plus)

# a pure superposition of the two levels: every function gives the variance
for f in (wigner_yanase(), sld(), wyd(0.3)):
    print(f"{f.label:9s} I(|+>, n) = {skew_value(rho_plus, n, f):.6f}")
print(f"variance          = {variance(rho_plus, n):.6f}")
print(f"direct trace form = {wy_direct(rho_plus, n):.6f}")

# mixing shrinks the coherence and the functions start to disagree
print("\n  p     WY        SLD       WYD(0.3)")
for p in (1.0, 0.8, 0.5, 0.2, 0.0):
    rho = p * rho_plus + (1 - p) * np.eye(2) / 2
    vals = [skew_value(rho, n, f) for f in (wigner_yanase(), sld(), wyd(0.3))]
    print(f"  {p:.1f}  " + "  ".join(f"{v:.6f}" for v in vals))
