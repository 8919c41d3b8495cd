"""Seeded random instances for property checks.

States are ``G G^dag / Tr`` with ``G`` a square complex Ginibre matrix, so
they are full rank with probability one.
"""
from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .qmat import DensityMatrix

__all__ = [
    "ginibre",
    "random_state",
    "random_pure_state",
    "random_observable",
    "random_ladder_observable",
    "random_unitary",
    "random_commuting_unitary",
    "random_covariant_kraus",
    "random_commuting_kraus",
    "energy_blocks",
]


def ginibre(d: int, rng: np.random.Generator, cols: int | None = None) -> np.ndarray:
    cols = d if cols is None else cols
    return (rng.standard_normal((d, cols)) + 1j * rng.standard_normal((d, cols))) / np.sqrt(2)


def random_state(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    g = ginibre(d, rng, rank)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(d: int, rng: np.random.Generator) -> DensityMatrix:
    psi = ginibre(d, rng, 1)[:, 0]
    return DensityMatrix.from_ket(psi)


def random_observable(d: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(d, rng)
    return (g + g.conj().T) / 2


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng) if d > 1 else np.exp(2j * np.pi * rng.random()).reshape(1, 1)


def random_ladder_observable(d: int, rng: np.random.Generator, levels: int | None = None):
    """Observable with small integer spectrum (degenerate in general) in a random basis.

    The energies are drawn from ``0..levels-1`` with both ends present.

    Returns ``(H, energies, basis)`` with ``H = basis @ diag(energies) @ basis^dag``.
    """
    levels = max(2, (d + 1) // 2) if levels is None else levels
    if d < 2 or levels < 2:
        raise ValueError("need d >= 2 and at least two energy levels")
    # both end rungs always occur, so H is never a multiple of the identity
    rest = rng.integers(0, levels, size=d - 2)
    energies = np.sort(np.concatenate([[0, levels - 1], rest])).astype(float)
    basis = random_unitary(d, rng)
    h = (basis * energies) @ basis.conj().T
    return (h + h.conj().T) / 2, energies, basis


def energy_blocks(energies, tol: float = 1e-9) -> list[np.ndarray]:
    """Index groups of (numerically) equal energies."""
    energies = np.asarray(energies, dtype=float)
    order = np.argsort(energies)
    blocks, current = [], [order[0]]
    for i in order[1:]:
        if abs(energies[i] - energies[current[-1]]) <= tol:
            current.append(i)
        else:
            blocks.append(np.array(current))
            current = [i]
    blocks.append(np.array(current))
    return blocks


def _inv_sqrt(s: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((s + s.conj().T) / 2)
    return (v / np.sqrt(w)) @ v.conj().T


def random_commuting_unitary(energies, basis, rng: np.random.Generator) -> np.ndarray:
    """Unitary commuting with ``basis @ diag(energies) @ basis^dag``."""
    d = len(energies)
    u = np.zeros((d, d), dtype=complex)
    for blk in energy_blocks(energies):
        u[np.ix_(blk, blk)] = random_unitary(len(blk), rng)
    return basis @ u @ basis.conj().T


def random_covariant_kraus(energies, basis, rng: np.random.Generator,
                           copies: int = 2) -> list[np.ndarray]:
    """Kraus operators of a random channel covariant under ``exp(iHt)``.

    Every Kraus operator moves energy by one fixed amount, which makes the
    channel covariant. Normalising with ``S^{-1/2}``, ``S = sum K^dag K``,
    preserves this because ``S`` is block diagonal in energy.
    """
    energies = np.asarray(energies, dtype=float)
    d = len(energies)
    diffs = energies[:, None] - energies[None, :]
    keys = np.round(diffs, 9)
    kraus = []
    for omega in np.unique(keys):
        mask = keys == omega
        for _ in range(copies):
            k = np.where(mask, ginibre(d, rng), 0.0)
            kraus.append(k)
    s = sum(k.conj().T @ k for k in kraus)
    norm = _inv_sqrt(s)
    return [basis @ (k @ norm) @ basis.conj().T for k in kraus]


def random_commuting_kraus(energies, basis, rng: np.random.Generator,
                           n_ops: int = 3) -> list[np.ndarray]:
    """Measurement operators ``E_j`` with ``[E_j, H] = 0`` and ``sum E_j^dag E_j = I``."""
    d = len(energies)
    blocks = energy_blocks(energies)
    ops = []
    for _ in range(n_ops):
        e = np.zeros((d, d), dtype=complex)
        for blk in blocks:
            e[np.ix_(blk, blk)] = ginibre(len(blk), rng)
        ops.append(e)
    s = sum(e.conj().T @ e for e in ops)
    norm = _inv_sqrt(s)
    return [basis @ (e @ norm) @ basis.conj().T for e in ops]
