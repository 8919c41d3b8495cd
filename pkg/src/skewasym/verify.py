"""Randomised property suites behind ``skewasym verify``.

Each suite returns a mapping ``check name -> Check``; a check counts how
many instances exceeded its tolerance and records the worst excess.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import aberg, clocknet
from .covariant import (
    QuantumChannel,
    apply,
    commuting_measurement,
    is_covariant,
    selective_monotonicity_check,
)
from .monotone import registered, validate_standard, weight
from .qmat import DensityMatrix, embed_local_observables, partial_trace, tensor
from .randoms import (
    random_commuting_kraus,
    random_commuting_unitary,
    random_covariant_kraus,
    random_ladder_observable,
    random_observable,
    random_state,
    random_unitary,
)
from .skewinfo import register_identity_check, skew_value, superadditivity_gap

__all__ = ["Check", "SUITES", "run_suite", "run_all"]

DEFAULT_SEED = 7
DEFAULT_COUNT = 200


@dataclass
class Check:
    tol: float
    n: int = 0
    violations: int = 0
    worst: float = 0.0
    notes: list = field(default_factory=list)

    def record(self, excess: float) -> None:
        """``excess`` is the signed amount by which the property fails (<= tol is fine)."""
        self.n += 1
        self.worst = max(self.worst, float(excess))
        if excess > self.tol:
            self.violations += 1

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.n > 0

    def as_dict(self) -> dict:
        d = {"n": self.n, "violations": self.violations, "worst": self.worst,
             "tol": self.tol, "passed": self.passed}
        if self.notes:
            d["notes"] = self.notes
        return d


def _fs():
    return registered()


def suite_axioms(rng, count):
    checks = {"standard_axioms": Check(0.0), "weight_symmetry": Check(1e-12)}
    for f in _fs():
        rep = validate_standard(f)
        checks["standard_axioms"].record(0.0 if rep.passed else 1.0)
    for _ in range(count):
        x, y = rng.random(2) * rng.choice([1e-6, 1e-2, 1.0])
        for f in _fs():
            checks["weight_symmetry"].record(abs(weight(f, x, y) - weight(f, y, x)))
    return checks


def suite_monotonicity(rng, count):
    checks = {
        "fixture_gate": Check(0.0),
        "deterministic": Check(1e-9),
        "selective": Check(1e-9),
        "partial_trace": Check(1e-10),
        "commuting_unitary": Check(1e-9),
    }
    # a Hadamard conjugation is not covariant for diag(0, 1) and must be refused
    had = QuantumChannel([aberg.HADAMARD])
    ok, _ = is_covariant(had, np.diag([0.0, 1.0]))
    checks["fixture_gate"].record(1.0 if ok else 0.0)

    fs = _fs()
    for i in range(count):
        d = (2, 3, 4, 6)[i % 4]
        h, energies, basis = random_ladder_observable(d, rng)
        rho = random_state(d, rng)
        f = fs[i % len(fs)]
        ch = QuantumChannel(random_covariant_kraus(energies, basis, rng))
        covariant, _ = is_covariant(ch, h)
        if not covariant:
            checks["fixture_gate"].record(1.0)
            continue
        out = DensityMatrix(apply(ch, rho))
        checks["deterministic"].record(skew_value(out, h, f) - skew_value(rho, h, f))
        inst = commuting_measurement(random_commuting_kraus(energies, basis, rng), h)
        before, after, _ = selective_monotonicity_check(inst, rho, h, f)
        checks["selective"].record(after - before)
        u = random_commuting_unitary(energies, basis, rng)
        rotated = DensityMatrix(u @ rho.matrix @ u.conj().T)
        checks["commuting_unitary"].record(abs(skew_value(rotated, h, f) - skew_value(rho, h, f)))

        d1, d2 = (2, 3) if i % 2 else (3, 2)
        r12 = random_state(d1 * d2, rng)
        h1, h2 = random_observable(d1, rng), random_observable(d2, rng)
        glob = skew_value(r12, embed_local_observables([h1, h2]), f)
        checks["partial_trace"].record(skew_value(partial_trace(r12, (d1, d2), [0]), h1, f) - glob)
    return checks


def suite_convexity(rng, count):
    checks = {"convexity": Check(1e-9), "register_identity": Check(1e-9)}
    fs = _fs()
    for i in range(count):
        d = (2, 3, 4)[i % 3]
        n = int(rng.integers(2, 5))
        states = [random_state(d, rng, rank=int(rng.integers(1, d + 1))) for _ in range(n)]
        p = rng.dirichlet(np.ones(n))
        h = random_observable(d, rng)
        f = fs[i % len(fs)]
        mix = DensityMatrix(sum(pk * s.matrix for pk, s in zip(p, states)))
        avg = sum(pk * skew_value(s, h, f) for pk, s in zip(p, states))
        checks["convexity"].record(skew_value(mix, h, f) - avg)
        lhs, rhs, diff = register_identity_check(states, p, h, f)
        checks["register_identity"].record(abs(diff))
    return checks


def suite_additivity(rng, count):
    checks = {"product_additivity": Check(1e-9)}
    fs = _fs()
    for i in range(count):
        d1, d2 = int(rng.integers(2, 5)), int(rng.integers(2, 4))
        r1, r2 = random_state(d1, rng), random_state(d2, rng)
        h1, h2 = random_observable(d1, rng), random_observable(d2, rng)
        f = fs[i % len(fs)]
        g = superadditivity_gap(DensityMatrix(tensor(r1.matrix, r2.matrix)), [h1, h2], (d1, d2), f)
        checks["product_additivity"].record(abs(g.gap))
    return checks


def suite_weak_superadditivity(rng, count, ks=(2, 3, 4)):
    checks = {f"k={k}": Check(1e-10) for k in ks}
    fs = _fs()
    for k in ks:
        for i in range(count):
            dims = (2,) * k if k > 2 else (int(rng.integers(2, 4)), int(rng.integers(2, 4)))
            rho = random_state(int(np.prod(dims)), rng)
            hs = [random_observable(d, rng) for d in dims]
            g = superadditivity_gap(rho, hs, dims, fs[i % len(fs)])
            checks[f"k={k}"].record(g.local_sum / k - g.global_value)
    return checks


def suite_aberg(rng, count):
    checks = {
        "energy_commutator": Check(1e-10),
        "catalytic_moments": Check(1e-12),
        "reduced_channel": Check(1e-10),
        "closed_form": Check(1e-12),
        "fig1_sign": Check(0.0),
        "global_bound": Check(1e-9),
    }
    for d in (2, 3):
        for _ in range(3):
            u = random_unitary(d, rng)
            cfg = aberg.AbergConfig(d=d, N=2, U=u, M=int(rng.integers(1, 7)))
            checks["energy_commutator"].record(aberg.energy_commutator(aberg.aberg_unitary(u, cfg.D), d, cfg.ancilla))
            _, _, diff = aberg.catalytic_check(cfg)
            checks["catalytic_moments"].record(diff)
            run = aberg.run_protocol(aberg.AbergConfig(d=d, N=1, U=u, M=cfg.M))
            ch = aberg.reduced_channel(u, cfg.M)
            e0 = np.zeros((d, d))
            e0[0, 0] = 1.0
            checks["reduced_channel"].record(float(np.max(np.abs(ch(e0) - run.system_state.matrix))))
    for M in range(1, 51):
        sim, closed = aberg.two_qubit_family(M)
        checks["closed_form"].record(float(np.max(np.abs(sim.matrix - closed))))
    for row in aberg.fig1_sweep(range(2, 51)):
        checks["fig1_sign"].record(1.0 if row.gap >= 0 else 0.0)
    for f in _fs():
        res = aberg.multipartite_violation(8, f, N_max=32, global_N=(1, 2, 4, 8, 16, 32))
        for _, g in res.global_curve:
            checks["global_bound"].record(g - res.i_ancilla)
    return checks


def suite_clocks(rng, count):
    checks = {
        "conservative_sound": Check(0.0),
        "naive_witness": Check(0.0),
        "scaled_witness": Check(0.0),
    }
    for i in range(max(count, 1)):
        sc = clocknet.random_scenario(rng, (2, 3, 4)[i % 3])
        res = clocknet.evaluate_decision(sc, "conservative")
        checks["conservative_sound"].record(0.0 if res.sound else 1.0)
    naive_found = False
    for M in (2, 3, 4, 8):
        sc = clocknet.aberg_scenario(M)
        checks["conservative_sound"].record(0.0 if clocknet.evaluate_decision(sc, "conservative").sound else 1.0)
        naive_found |= not clocknet.evaluate_decision(sc, "naive").sound
    checks["naive_witness"].record(0.0 if naive_found else 1.0)
    for c in (1.2, 2.0):
        sc = clocknet.find_scaled_witness(c)
        bad = sc is None or clocknet.evaluate_decision(sc, "scaled", c).sound
        checks["scaled_witness"].record(1.0 if bad else 0.0)
        if sc is not None:
            checks["scaled_witness"].notes.append(f"c={c}: {sc.name}")
    return checks


SUITES = {
    "axioms": suite_axioms,
    "monotonicity": suite_monotonicity,
    "convexity": suite_convexity,
    "additivity": suite_additivity,
    "weak-superadditivity": suite_weak_superadditivity,
    "aberg": suite_aberg,
    "clocks": suite_clocks,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, count: int = DEFAULT_COUNT) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    rng = np.random.default_rng(seed)
    return SUITES[name](rng, count)


def run_all(seed: int = DEFAULT_SEED, count: int = DEFAULT_COUNT, names=None) -> dict:
    names = list(SUITES) if names is None else names
    return {name: run_suite(name, seed, count) for name in names}
