"""
Monotonicity under covariant operations
=======================================

Channels that commute with time translations cannot create asymmetry. We
draw random covariant channels and commuting-Kraus measurements and watch
the skew information never go up, while a Hadamard gate, which is not
covariant, is refused by the checker.
"""

import numpy as np

from skewasym import aberg
from skewasym.covariant import QuantumChannel, apply, commuting_measurement, is_covariant, selective_monotonicity_check
from skewasym.monotone import registered
from skewasym.qmat import DensityMatrix
from skewasym.randoms import random_commuting_kraus, random_covariant_kraus, random_ladder_observable, random_state
from skewasym.skewinfo import skew_value

rng = np.random.default_rng(3)

ok, dev = is_covariant(QuantumChannel([aberg.HADAMARD]), np.diag([0.0, 1.0]))
print(f"Hadamard covariant? {ok} (deviation {dev:.3f})")

print("\n d   f          before     after channel  after measurement (avg)")
for d in (2, 3, 4, 6):
    h, energies, basis = random_ladder_observable(d, rng)
    rho = random_state(d, rng)
    ch = QuantumChannel(random_covariant_kraus(energies, basis, rng))
    inst = commuting_measurement(random_commuting_kraus(energies, basis, rng), h)
    out = DensityMatrix(apply(ch, rho))
    for f in registered()[:3]:
        before, after, _ = selective_monotonicity_check(inst, rho, h, f)
        print(f" {d}   {f.label:9s}  {before:.5f}    {skew_value(out, h, f):.5f}        {after:.5f}")
