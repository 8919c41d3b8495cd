"""Distributed quantum clocks: reporting local skew informations and deciding.

Parties hold marginals of a shared state and report ``I^f`` of their own
marginal over a (simulated) classical channel. The requester decides whether
to pull all states together using

* ``naive``:        ``sum(reports) >= threshold``
* ``conservative``: ``sum(reports) / k >= threshold``
* ``scaled``:       ``c * sum(reports) / k >= threshold``

The conservative rule is always sound because the global value is at least
the average of the marginal values; no constant ``c > 1`` keeps that
guarantee.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import aberg
from .monotone import MonotoneFunction, wigner_yanase
from .qmat import DensityMatrix, SubsystemLayout, as_observable, as_state, embed_local_observables, partial_trace
from .randoms import random_observable, random_state
from .skewinfo import skew_value

__all__ = [
    "RULES",
    "SOUNDNESS_TOL",
    "Party",
    "Report",
    "ClockScenario",
    "DecisionResult",
    "run_reporting",
    "decide",
    "evaluate_decision",
    "aberg_scenario",
    "find_scaled_witness",
    "random_scenario",
]

RULES = ("naive", "conservative", "scaled")
SOUNDNESS_TOL = 1e-10


@dataclass(frozen=True)
class Party:
    id: int
    marginal: DensityMatrix
    local_H: np.ndarray
    reported_value: float


@dataclass(frozen=True)
class Report:
    party: int
    value: float


@dataclass
class ClockScenario:
    global_state: DensityMatrix
    layout: SubsystemLayout
    H_list: list
    threshold: float
    f: MonotoneFunction = field(default_factory=wigner_yanase)
    name: str = ""

    def __post_init__(self):
        self.global_state = as_state(self.global_state)
        self.layout = SubsystemLayout(self.layout)
        self.layout.check(self.global_state.dim)
        self.H_list = [as_observable(h).matrix for h in self.H_list]
        if len(self.H_list) != len(self.layout):
            raise ValueError("need one local observable per party")
        for h, d in zip(self.H_list, self.layout):
            if h.shape[0] != d:
                raise ValueError(f"local observable of dimension {h.shape[0]} for a {d}-level party")
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")

    @property
    def k(self) -> int:
        return len(self.layout)

    def global_value(self) -> float:
        return skew_value(self.global_state, embed_local_observables(self.H_list, self.layout), self.f)


def run_reporting(scenario: ClockScenario, perturb: Mapping[int, float] | None = None):
    """Each party measures ``I^f`` of its marginal and reports it.

    ``perturb`` adds a fixed offset to the report of the given party ids,
    which models a dishonest or miscalibrated party; honest by default.
    Returns ``(parties, log)``, the log being the ordered report messages.
    """
    perturb = perturb or {}
    parties, log = [], []
    for j in range(scenario.k):
        marg = partial_trace(scenario.global_state, scenario.layout, [j])
        value = skew_value(marg, scenario.H_list[j], scenario.f) + float(perturb.get(j, 0.0))
        parties.append(Party(j, marg, scenario.H_list[j], value))
        log.append(Report(j, value))
    return parties, tuple(log)


def decide(reports: Sequence[float], threshold: float, rule: str = "conservative",
           scale: float | None = None) -> bool:
    """Request the states or not, given the reported local values."""
    reports = [float(r) for r in reports]
    if not reports:
        raise ValueError("decision needs at least one report")
    k = len(reports)
    total = sum(reports)
    if rule == "naive":
        return total >= threshold
    if rule == "conservative":
        return total / k >= threshold
    if rule == "scaled":
        if scale is None:
            raise ValueError("scaled rule needs a scale constant")
        return scale * total / k >= threshold
    raise ValueError(f"unknown rule {rule!r}; choose from {RULES}")


@dataclass(frozen=True)
class DecisionResult:
    decision: bool
    reports: tuple
    actual_global: float
    sound: bool
    rule: str = "conservative"

    def to_record(self) -> dict:
        return {
            "decision": self.decision,
            "reports": list(self.reports),
            "actual_global": self.actual_global,
            "sound": self.sound,
        }


def evaluate_decision(scenario: ClockScenario, rule: str = "conservative",
                      scale: float | None = None,
                      perturb: Mapping[int, float] | None = None) -> DecisionResult:
    """Decide from the reports, then check against the true global value.

    A decision is unsound when the states are requested but the global skew
    information falls short of the threshold.
    """
    _, log = run_reporting(scenario, perturb)
    reports = tuple(r.value for r in log)
    decision = decide(reports, scenario.threshold, rule, scale)
    actual = scenario.global_value()
    sound = (not decision) or actual >= scenario.threshold - SOUNDNESS_TOL
    return DecisionResult(bool(decision), reports, actual, bool(sound), rule)


def aberg_scenario(M: int, k: int = 2, depth: int = 1, threshold: float | None = None,
                   f: MonotoneFunction | None = None, U=aberg.HADAMARD) -> ClockScenario:
    """Parties holding equal blocks of the ``N = k**depth`` protocol output.

    Each party's block is carried in its energy-sector encoding. Without an
    explicit ``threshold`` the midpoint between the global value and the sum
    of reports is used, the interval in which the naive rule fails.
    """
    f = wigner_yanase() if f is None else f
    if depth < 1:
        raise ValueError("depth must be at least 1")
    size = k ** (depth - 1)
    rho, dims, hs = aberg.block_state(U, M, [size] * k)
    if threshold is None:
        g = skew_value(rho, embed_local_observables(hs, dims), f)
        parts = sum(skew_value(partial_trace(rho, dims, [j]), hs[j], f) for j in range(k))
        threshold = 0.5 * (g + parts) if parts > g else 1.1 * g
    return ClockScenario(rho, dims, hs, float(threshold), f, name=f"aberg-M{M}-k{k}-depth{depth}")


def find_scaled_witness(c: float, k: int = 2, f: MonotoneFunction | None = None,
                        M_values: Sequence[int] = (2, 3, 4, 8), max_depth: int = 6) -> ClockScenario | None:
    """Search protocol scenarios for one where the ``c/k`` rule is unsound.

    The threshold is placed halfway between the global value and
    ``c * mean(reports)``. Returns ``None`` if nothing is found within the
    search range.
    """
    f = wigner_yanase() if f is None else f
    for depth in range(1, max_depth + 1):
        for M in M_values:
            size = k ** (depth - 1)
            if (size + 1) ** k > aberg.MAX_BLOCK_DIM:
                continue
            rho, dims, hs = aberg.block_state(aberg.HADAMARD, M, [size] * k)
            g = skew_value(rho, embed_local_observables(hs, dims), f)
            parts = sum(skew_value(partial_trace(rho, dims, [j]), hs[j], f) for j in range(k))
            scaled = c * parts / k
            if scaled > g * (1 + 1e-6) + 1e-9:
                th = 0.5 * (g + scaled)
                return ClockScenario(rho, dims, hs, th, f, name=f"aberg-M{M}-k{k}-depth{depth}")
    return None


def random_scenario(rng: np.random.Generator, k: int, f: MonotoneFunction | None = None,
                    local_dims: Sequence[int] | None = None) -> ClockScenario:
    """Random full-rank state, random local observables and a random threshold.

    The threshold is drawn uniformly from ``(0, 1.5 * max(global, sum of locals)]``.
    """
    f = wigner_yanase() if f is None else f
    if local_dims is None:
        local_dims = [int(rng.integers(2, 4)) if k <= 3 else 2 for _ in range(k)]
    layout = SubsystemLayout(local_dims)
    rho = random_state(layout.total, rng)
    hs = [random_observable(d, rng) for d in layout]
    g = skew_value(rho, embed_local_observables(hs, layout), f)
    parts = sum(skew_value(partial_trace(rho, layout, [j]), hs[j], f) for j in range(k))
    top = 1.5 * max(g, parts)
    threshold = float(top * (1.0 - rng.random()))
    return ClockScenario(rho, layout, hs, threshold, f, name="random")

