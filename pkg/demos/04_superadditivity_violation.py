"""
Two qubits with more local than global asymmetry
================================================

Running the catalytic protocol twice leaves two correlated qubits whose
local skew informations add up to more than the skew information of the
pair. The gap is zero when the ancilla has a single level, largest at
M = 4, and fades as the ancilla grows.
"""

from skewasym import aberg
from skewasym.io import sweep_csv

rows = aberg.fig1_sweep(range(1, 31))
print(sweep_csv(rows[:8]), end="")

worst = min(rows, key=lambda r: r.gap)
print(f"\nlargest violation at M = {worst.M}: gap {worst.gap:.6f}")
for M in (20, 100, 200):
    print(f"M = {M:3d}: gap {aberg.fig1_sweep([M])[0].gap:.6f}")

# many qubits: the local sum grows linearly, the global value stays below
# the ancilla's own skew information
res = aberg.multipartite_violation(8, N_max=64, global_N=(1, 4, 16, 32))
print(f"\nM = 8: ancilla {res.i_ancilla:.4f}, each qubit {res.i_local:.6f}, "
      f"local sum passes the ancilla at N = {res.n_star}")
for N, g in res.global_curve:
    print(f"  N = {N:2d}: local sum {N * res.i_local:.4f}, global {g:.4f}")
