"""Quantum channels in Kraus form and U(1) covariance.

Covariance under ``t -> exp(iHt)`` is checked at the generator level:
``E(-i[H_in, B]) == -i[H_out, E(B)]`` for every matrix unit ``B``. For a
one-parameter group this is equivalent to ``E o U_t = U'_t o E`` for all t.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .monotone import MonotoneFunction
from .qmat import DensityMatrix, as_observable, as_state
from .skewinfo import skew_value

__all__ = [
    "TP_TOL",
    "COVARIANCE_TOL",
    "QuantumChannel",
    "Instrument",
    "apply",
    "identity_channel",
    "unitary_channel",
    "partial_trace_channel",
    "is_covariant",
    "commuting_measurement",
    "selective_monotonicity_check",
]

TP_TOL = 1e-10
COVARIANCE_TOL = 1e-9
COMMUTATOR_TOL = 1e-9
BRANCH_CUTOFF = 1e-12


class QuantumChannel:
    """CP map ``rho -> sum_j K_j rho K_j^dag``.

    By default the map must be trace preserving. Pass
    ``trace_preserving=False`` for an instrument branch, which only needs
    ``sum K^dag K <= I``.
    """

    def __init__(self, kraus_ops: Sequence, trace_preserving: bool = True, tol: float = TP_TOL):
        ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise ValueError("Kraus operators must be matrices of one common shape")
        self.dim_out, self.dim_in = shape
        gram = sum(k.conj().T @ k for k in ops)
        if trace_preserving:
            defect = float(np.max(np.abs(gram - np.eye(self.dim_in))))
            if defect > tol:
                raise ValueError(f"Kraus operators are not trace preserving (defect {defect:.3e})")
        else:
            top = float(np.max(np.linalg.eigvalsh((gram + gram.conj().T) / 2)))
            if top > 1 + tol:
                raise ValueError(f"Kraus operators increase trace (largest eigenvalue {top:.6f})")
        for k in ops:
            k.setflags(write=False)
        self.kraus_ops = tuple(ops)
        self.trace_preserving = trace_preserving

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)

    def __repr__(self):
        return f"QuantumChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, n_kraus={len(self.kraus_ops)})"


@dataclass(frozen=True)
class Instrument:
    branches: tuple

    def __post_init__(self):
        if not self.branches:
            raise ValueError("an instrument needs at least one branch")
        d = self.branches[0].dim_in
        gram = sum(k.conj().T @ k for br in self.branches for k in br.kraus_ops)
        defect = float(np.max(np.abs(gram - np.eye(d))))
        if defect > TP_TOL:
            raise ValueError(f"instrument branches do not sum to a trace-preserving map (defect {defect:.3e})")

    def total_channel(self) -> QuantumChannel:
        return QuantumChannel([k for br in self.branches for k in br.kraus_ops])


def apply(channel: QuantumChannel, rho) -> np.ndarray:
    """Raw output matrix ``sum K rho K^dag``.

    Works for any square input of the right size, including non-Hermitian
    operators; wrap in ``DensityMatrix`` when a state is expected.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (channel.dim_in, channel.dim_in):
        raise ValueError(f"channel expects a {channel.dim_in}x{channel.dim_in} input, got {m.shape}")
    return sum(k @ m @ k.conj().T for k in channel.kraus_ops)


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel([np.eye(d)])


def unitary_channel(u) -> QuantumChannel:
    return QuantumChannel([u])


def partial_trace_channel(d_keep: int, d_drop: int, drop_first: bool = False) -> QuantumChannel:
    """Partial trace as a channel with Kraus operators ``I (x) <b|`` (or ``<b| (x) I``)."""
    ops = []
    for b in range(d_drop):
        bra = np.zeros((1, d_drop))
        bra[0, b] = 1.0
        ops.append(np.kron(bra, np.eye(d_keep)) if drop_first else np.kron(np.eye(d_keep), bra))
    return QuantumChannel(ops)


def is_covariant(channel: QuantumChannel, h_in, h_out=None, tol: float = COVARIANCE_TOL):
    """Generator-level covariance test.

    Returns ``(ok, max_deviation)`` where the deviation is the largest
    entry-wise violation over all matrix units of the input space.
    """
    hi = as_observable(h_in).matrix
    ho = hi if h_out is None else as_observable(h_out).matrix
    if hi.shape[0] != channel.dim_in or ho.shape[0] != channel.dim_out:
        raise ValueError("observable dimensions do not match the channel")
    d = channel.dim_in
    worst = 0.0
    for a in range(d):
        for b in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[a, b] = 1.0
            lhs = apply(channel, -1j * (hi @ unit - unit @ hi))
            out = apply(channel, unit)
            rhs = -1j * (ho @ out - out @ ho)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst <= tol, worst


def commuting_measurement(ops: Sequence, h, tol: float = COMMUTATOR_TOL) -> Instrument:
    """Instrument with branches ``rho -> E_j rho E_j^dag`` for ``[E_j, H] = 0``.

    Raises ``ValueError`` naming the first operator that fails to commute
    with ``H``, or if the operators are not complete.
    """
    hm = as_observable(h).matrix
    mats = [np.asarray(e, dtype=complex) for e in ops]
    for j, e in enumerate(mats):
        comm = float(np.linalg.norm(e @ hm - hm @ e, 2))
        if comm > tol:
            raise ValueError(f"measurement operator {j} does not commute with H (norm {comm:.3e})")
    return Instrument(tuple(QuantumChannel([e], trace_preserving=False) for e in mats))


def selective_monotonicity_check(instrument: Instrument, rho, h,
                                 f: MonotoneFunction | None = None, tol: float = 1e-9):
    """Compare ``I(rho)`` with the branch-averaged ``sum_k p_k I(sigma_k)``.

    Returns ``(before, after_avg, ok)``. Every branch has to pass
    :func:`is_covariant`; branches with probability at most ``1e-12`` are
    skipped.
    """
    rho = as_state(rho)
    hm = as_observable(h).matrix
    for j, br in enumerate(instrument.branches):
        ok, dev = is_covariant(br, hm)
        if not ok:
            raise ValueError(f"instrument branch {j} is not covariant (deviation {dev:.3e})")
    before = skew_value(rho, hm, f)
    after = 0.0
    for br in instrument.branches:
        out = apply(br, rho)
        p = float(np.real(np.trace(out)))
        if p <= BRANCH_CUTOFF:
            continue
        after += p * skew_value(DensityMatrix(out / p), hm, f)
    return before, after, after <= before + tol
