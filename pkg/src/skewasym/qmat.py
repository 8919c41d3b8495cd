"""Dense Hermitian linear algebra for density matrices and observables.

Subsystem 1 is always the most significant tensor factor, so a ket
``|s1 s2 ... sk>`` has flat index ``s1 * (d2 * ... * dk) + ...``, which is
exactly ``numpy.kron`` ordering.
"""
from __future__ import annotations

from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "HERMITIAN_TOL",
    "PSD_TOL",
    "TRACE_TOL",
    "DensityMatrix",
    "Observable",
    "SubsystemLayout",
    "as_state",
    "as_observable",
    "eig_hermitian",
    "tensor",
    "partial_trace",
    "partial_trace_array",
    "embed_local_observables",
    "matrix_power",
    "ket",
    "projector",
]

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-9
# eigenvalues at or below this fraction of the largest are round-off zeros
ZERO_EIG_RTOL = 1e-12


def _as_square(a, name="matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def _hermitian_error(a: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return float(np.max(np.abs(a - a.conj().T))) / scale if a.size else 0.0


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude component of every column made real positive
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    phases = pivots / np.abs(pivots)
    return vecs / phases


def eig_hermitian(a, tol: float = HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square Hermitian matrix.
    tol : float
        Allowed Hermiticity defect, relative to ``max(1, max|a|)``.

    Returns
    -------
    evals : ndarray
        Real eigenvalues in ascending order.
    evecs : ndarray
        Orthonormal eigenvectors as columns. The phase of each column is
        fixed so its largest-magnitude entry is real and positive.
    """
    a = _as_square(a)
    err = _hermitian_error(a)
    if err > tol:
        raise ValueError(f"matrix is not Hermitian (defect {err:.3e} > {tol:.1e})")
    a = 0.5 * (a + a.conj().T)
    evals, evecs = np.linalg.eigh(a)
    return evals, _fix_phases(evecs)


class Observable:
    """Hermitian matrix playing the role of a conserved quantity."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol: float = HERMITIAN_TOL):
        m = _as_square(matrix, "observable")
        err = _hermitian_error(m)
        if err > tol:
            raise ValueError(f"observable is not Hermitian (defect {err:.3e})")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"Observable(dim={self.dim})"


class DensityMatrix:
    """Positive unit-trace Hermitian matrix with a lazily cached spectrum.

    Eigenvalues in ``[-PSD_TOL, 0)`` are treated as round-off: they are
    clamped to zero and the matrix is rebuilt and renormalised. Anything more
    negative raises ``ValueError``.
    """

    def __init__(self, matrix, tol: float = HERMITIAN_TOL, trace_tol: float = TRACE_TOL):
        m = _as_square(matrix, "density matrix")
        err = _hermitian_error(m)
        if err > tol:
            raise ValueError(f"state is not Hermitian (defect {err:.3e})")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"state trace is {tr!r}, expected 1")
        evals, evecs = eig_hermitian(m, tol=np.inf)
        if evals.size and evals[0] < -PSD_TOL:
            raise ValueError(f"state is not positive semidefinite (min eigenvalue {evals[0]:.3e})")
        if evals.size and evals[0] < 0:
            evals = np.clip(evals, 0.0, None)
            evals = evals / evals.sum()
            m = (evecs * evals) @ evecs.conj().T
            self.__dict__["spectrum"] = (evals, evecs)
        m.setflags(write=False)
        self.matrix = m

    @classmethod
    def from_ket(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d) / d)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self):
        """``(eigenvalues, eigenvectors)`` with eigenvalues ascending."""
        return eig_hermitian(self.matrix, tol=np.inf)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectrum[1]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def as_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def as_observable(h) -> Observable:
    return h if isinstance(h, Observable) else Observable(h)


class SubsystemLayout(tuple):
    """Ordered local dimensions ``(d_1, ..., d_k)``."""

    def __new__(cls, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid subsystem dimensions {dims}")
        return super().__new__(cls, dims)

    @property
    def total(self) -> int:
        return int(np.prod(self))

    def check(self, dim: int) -> None:
        if self.total != dim:
            raise ValueError(f"layout {tuple(self)} has total dimension {self.total}, state has {dim}")


def tensor(*mats) -> np.ndarray:
    """Kronecker product of the arguments, first argument most significant."""
    if not mats:
        raise ValueError("tensor needs at least one factor")
    return reduce(np.kron, (np.asarray(m, dtype=complex) for m in mats))


def partial_trace_array(a, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Partial trace of an arbitrary (not necessarily normalised) square array.

    ``keep`` holds zero-based subsystem indices; the kept factors appear in
    their original order.
    """
    a = _as_square(a)
    layout = SubsystemLayout(dims)
    layout.check(a.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= len(layout):
        raise ValueError(f"keep indices {keep} out of range for {len(layout)} subsystems")
    n = len(layout)
    t = a.reshape(tuple(layout) * 2)
    # einsum labels: rows 0..n-1, columns n..2n-1, traced columns reuse the row label
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    res = np.einsum(t, row + col, out)
    dk = int(np.prod([layout[i] for i in keep]))
    return res.reshape(dk, dk)


def partial_trace(rho, dims: Sequence[int], keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep`` (zero-based)."""
    rho = as_state(rho)
    return DensityMatrix(partial_trace_array(rho.matrix, dims, keep))


def embed_local_observables(h_list: Sequence, dims: Sequence[int] | None = None) -> Observable:
    """Total observable ``sum_j H_j (x) I_rest``.

    When ``dims`` is omitted it is read off the local observables.
    """
    mats = [np.asarray(as_observable(h).matrix) for h in h_list]
    local_dims = [m.shape[0] for m in mats]
    if dims is None:
        dims = local_dims
    layout = SubsystemLayout(dims)
    if len(mats) != len(layout) or tuple(local_dims) != tuple(layout):
        raise ValueError(f"observable dimensions {local_dims} do not match layout {tuple(layout)}")
    total = np.zeros((layout.total, layout.total), dtype=complex)
    for j, h in enumerate(mats):
        left = int(np.prod(layout[:j]))
        right = int(np.prod(layout[j + 1:]))
        total += np.kron(np.kron(np.eye(left), h), np.eye(right))
    return Observable(total)


def matrix_power(rho, alpha: float) -> np.ndarray:
    """``rho**alpha`` through the spectrum, with ``0**alpha = 0``.

    Eigenvalues at or below ``ZERO_EIG_RTOL * lambda_max`` count as zero.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    rho = as_state(rho)
    evals, evecs = rho.spectrum
    cut = ZERO_EIG_RTOL * float(evals[-1])
    powered = np.where(evals > cut, np.abs(evals) ** alpha, 0.0)
    return (evecs * powered) @ evecs.conj().T


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())
