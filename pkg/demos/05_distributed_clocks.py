"""
Deciding whether to gather a distributed clock
==============================================

Parties report the skew information of their own share. Adding the reports
overestimates what the combined state holds, so a requester who compares
the sum with a threshold can be fooled. Comparing the average is always
safe, and no larger multiple of the average is.
"""

from skewasym import clocknet
from skewasym.io import bundled_scenario_path, load_scenario

sc, _ = load_scenario(bundled_scenario_path("aberg_m4"))
for rule in ("naive", "conservative"):
    res = clocknet.evaluate_decision(sc, rule)
    print(f"{rule:12s} reports {[round(r, 4) for r in res.reports]}, threshold {sc.threshold}, "
          f"request {res.decision}, global {res.actual_global:.4f}, sound {res.sound}")

for c in (2.0, 1.2):
    w = clocknet.find_scaled_witness(c)
    res = clocknet.evaluate_decision(w, "scaled", c)
    print(f"c = {c}: {w.name} requests {res.decision} and is sound {res.sound}")
