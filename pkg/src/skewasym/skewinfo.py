"""Metric-adjusted skew informations and derived quantities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .monotone import MonotoneFunction, weight, wigner_yanase
from .qmat import (
    ZERO_EIG_RTOL,
    DensityMatrix,
    SubsystemLayout,
    as_observable,
    as_state,
    embed_local_observables,
    matrix_power,
    partial_trace,
)

__all__ = [
    "ZERO_EIG_RTOL",
    "SkewResult",
    "GapResult",
    "skew_info",
    "skew_value",
    "wy_direct",
    "wyd_direct",
    "variance",
    "superadditivity_gap",
    "register_state",
    "register_identity_check",
]

NEG_CLAMP = 1e-12
WEAK_BOUND_TOL = 1e-10


@dataclass(frozen=True)
class SkewResult:
    value: float
    f_id: str
    rank: int
    largest_discarded: float

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class GapResult:
    global_value: float
    local_values: tuple
    gap: float
    weak_bound_satisfied: bool

    @property
    def local_sum(self) -> float:
        return float(sum(self.local_values))


def _check_dims(rho: DensityMatrix, h) -> np.ndarray:
    hm = as_observable(h).matrix
    if hm.shape[0] != rho.dim:
        raise ValueError(f"observable dimension {hm.shape[0]} does not match state dimension {rho.dim}")
    return hm


def skew_info(rho, h, f: MonotoneFunction | None = None) -> SkewResult:
    """Skew information ``I^f(rho, H)`` from the spectral sum.

    Eigenvalues at or below ``1e-12 * lambda_max`` are set to zero before the
    kernel is evaluated. ``f`` defaults to Wigner-Yanase.
    """
    f = wigner_yanase() if f is None else f
    rho = as_state(rho)
    hm = _check_dims(rho, h)
    evals, evecs = rho.spectrum
    lam_max = float(evals[-1])
    small = evals <= ZERO_EIG_RTOL * lam_max
    discarded = float(np.max(np.abs(evals[small]))) if np.any(small) else 0.0
    lam = np.where(small, 0.0, evals)

    h_eig = evecs.conj().T @ hm @ evecs
    w = weight(f, lam[:, None], lam[None, :])
    value = float(np.sum(w * np.abs(h_eig) ** 2))
    if value < 0:
        if value < -NEG_CLAMP:
            raise ArithmeticError(f"negative skew information {value:.3e}")
        value = 0.0
    return SkewResult(value, f.label, int(np.count_nonzero(~small)), discarded)


def skew_value(rho, h, f: MonotoneFunction | None = None) -> float:
    return skew_info(rho, h, f).value


def wy_direct(rho, h) -> float:
    """``Tr(rho H^2) - Tr(sqrt(rho) H sqrt(rho) H)``."""
    rho = as_state(rho)
    hm = _check_dims(rho, h)
    s = matrix_power(rho, 0.5)
    return float(np.real(np.trace(rho.matrix @ hm @ hm) - np.trace(s @ hm @ s @ hm)))


def wyd_direct(rho, h, alpha: float) -> float:
    """``Tr(rho H^2) - Tr(rho^a H rho^(1-a) H)`` for ``0 < a < 1``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    rho = as_state(rho)
    hm = _check_dims(rho, h)
    ra = matrix_power(rho, alpha)
    rb = matrix_power(rho, 1.0 - alpha)
    return float(np.real(np.trace(rho.matrix @ hm @ hm) - np.trace(ra @ hm @ rb @ hm)))


def variance(rho, h) -> float:
    rho = as_state(rho)
    hm = _check_dims(rho, h)
    m1 = np.real(np.trace(rho.matrix @ hm))
    m2 = np.real(np.trace(rho.matrix @ hm @ hm))
    return float(m2 - m1 ** 2)


def superadditivity_gap(rho, h_list: Sequence, dims: Sequence[int] | None = None,
                        f: MonotoneFunction | None = None) -> GapResult:
    """Compare the global skew information with the sum of the marginal ones.

    ``gap = global - sum(locals)``, so a negative gap is a violation of
    superadditivity. ``weak_bound_satisfied`` checks the ``1/k`` relaxation.
    """
    rho = as_state(rho)
    mats = [as_observable(h) for h in h_list]
    layout = SubsystemLayout(dims if dims is not None else [m.dim for m in mats])
    layout.check(rho.dim)
    h_total = embed_local_observables(mats, layout)
    g = skew_value(rho, h_total, f)
    locals_ = tuple(skew_value(partial_trace(rho, layout, [j]), mats[j], f)
                    for j in range(len(layout)))
    k = len(layout)
    weak = g >= sum(locals_) / k - WEAK_BOUND_TOL
    return GapResult(g, locals_, g - sum(locals_), bool(weak))


def register_state(states: Sequence, probs: Sequence[float]) -> DensityMatrix:
    """Classical-quantum state ``sum_k p_k rho_k (x) |k><k|``."""
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or len(probs) != len(states) or len(states) == 0:
        raise ValueError("need one probability per state")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError(f"invalid probability vector {probs}")
    mats = [as_state(s).matrix for s in states]
    d = mats[0].shape[0]
    if any(m.shape[0] != d for m in mats):
        raise ValueError("register states must share one dimension")
    n = len(mats)
    total = np.zeros((d * n, d * n), dtype=complex)
    for k, (p, m) in enumerate(zip(probs, mats)):
        flag = np.zeros((n, n))
        flag[k, k] = 1.0
        total += p * np.kron(m, flag)
    return DensityMatrix(total)


def register_identity_check(states: Sequence, probs: Sequence[float], h,
                            f: MonotoneFunction | None = None):
    """Evaluate both sides of ``I(sum p_k rho_k (x) |k><k|, H (x) I) = sum p_k I(rho_k, H)``.

    Returns ``(lhs, rhs, lhs - rhs)``.
    """
    block = register_state(states, probs)
    hm = as_observable(h).matrix
    lhs = skew_value(block, np.kron(hm, np.eye(len(states))), f)
    rhs = float(sum(p * skew_value(s, hm, f) for p, s in zip(probs, states)))
    return lhs, rhs, lhs - rhs
