"""Catalytic covariant implementation of a unitary with a ladder ancilla.

The ancilla is an energy ladder ``H_A = sum_j j |j><j|`` with shift
``Delta = sum_j |j+1><j|``. The joint unitary

    V(U) = sum_{j,k} |j><j|U|k><k| (x) Delta^(k-j)

conserves ``H_S + H_A`` and, with the ancilla in ``|eta_M^l>`` (uniform over
``M`` consecutive levels starting at ``l``), implements ``U`` approximately
on the system. The ladder is infinite in principle; here it is a finite
window with one guard level at each end, large enough that the protocol
never reaches the guards. Reaching a guard raises :class:`WindowOverflowError`.

Index convention inside the window: level ``offset + i`` sits at index ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .monotone import MonotoneFunction, wigner_yanase
from .qmat import DensityMatrix, partial_trace, partial_trace_array, tensor
from .skewinfo import GapResult, skew_value, superadditivity_gap

__all__ = [
    "HADAMARD",
    "WindowOverflowError",
    "LadderAncilla",
    "AbergConfig",
    "ProtocolRun",
    "window_size",
    "shift_operator",
    "eta_vector",
    "eta_moment",
    "alphas",
    "moments",
    "aberg_unitary",
    "energy_commutator",
    "run_protocol",
    "MomentChannel",
    "reduced_channel",
    "catalytic_check",
    "two_qubit_closed_form",
    "two_qubit_family",
    "Fig1Row",
    "fig1_sweep",
    "sector_weights",
    "block_state",
    "unit_marginals",
    "MultipartiteResult",
    "multipartite_violation",
    "WitnessReport",
    "optimality_witness",
]

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2)
GUARD_TOL = 1e-12
NORM_TOL = 1e-12
# product of block dimensions allowed in the compressed representation
MAX_BLOCK_DIM = 4096


class WindowOverflowError(RuntimeError):
    """The ancilla state reached a guard level of the truncated ladder."""


def window_size(M: int, N: int, d: int) -> int:
    """Ladder window for ``N`` steps on ``d``-level systems: ``M + 2N(d-1) + 2``."""
    return int(M) + 2 * int(N) * (int(d) - 1) + 2


@dataclass(frozen=True)
class LadderAncilla:
    D: int
    offset: int = 0

    def __post_init__(self):
        if self.D < 1:
            raise ValueError("window size must be positive")

    @property
    def levels(self) -> np.ndarray:
        return self.offset + np.arange(self.D)

    @property
    def hamiltonian(self) -> np.ndarray:
        return np.diag(self.levels.astype(float))

    def index(self, level: int) -> int:
        i = int(level) - self.offset
        if not 0 <= i < self.D:
            raise WindowOverflowError(f"level {level} outside window [{self.offset}, {self.offset + self.D - 1}]")
        return i

    @classmethod
    def for_protocol(cls, M: int, l: int, N: int, d: int) -> "LadderAncilla":
        # eta support centred with N(d-1) free levels plus one guard on each side
        return cls(window_size(M, N, d), int(l) - 1 - int(N) * (int(d) - 1))


def shift_operator(D: int, a: int) -> np.ndarray:
    """Truncated ``Delta^a`` on a ``D``-level window (``|j> -> |j+a>``)."""
    if abs(a) >= D:
        raise ValueError(f"shift {a} does not fit in a window of {D} levels")
    return np.eye(D, k=-int(a), dtype=complex)


def eta_vector(M: int, l: int, ancilla: LadderAncilla) -> np.ndarray:
    """``|eta_M^l> = M^(-1/2) sum_{i<M} |l+i>`` inside the window."""
    if M < 1:
        raise ValueError("M must be a positive integer")
    lo, hi = ancilla.index(l), ancilla.index(l + M - 1)
    if lo == 0 or hi == ancilla.D - 1:
        raise WindowOverflowError("eta support touches a guard level")
    v = np.zeros(ancilla.D, dtype=complex)
    v[lo:hi + 1] = 1.0 / np.sqrt(M)
    return v


def eta_moment(M: int, a: int) -> float:
    """``Tr[Delta^a eta_M] = max(M - |a|, 0) / M``."""
    return max(M - abs(int(a)), 0) / M


def alphas(M: int) -> tuple[float, float]:
    """Overlaps ``alpha_i = <eta^{l-i}|eta^l>`` for ``i = 1, 2``."""
    return eta_moment(M, 1), eta_moment(M, 2)


def moments(sigma, a_range: Iterable[int]) -> dict[int, complex]:
    """Shift moments ``Tr[Delta^a sigma]`` of an ancilla state (matrix or ket)."""
    s = np.asarray(sigma, dtype=complex)
    if s.ndim == 1:
        s = np.outer(s, s.conj())
    D = s.shape[0]
    out = {}
    for a in a_range:
        a = int(a)
        if abs(a) >= D:
            raise ValueError(f"moment order {a} exceeds the window of {D} levels")
        # Tr[Delta^a s] = sum_k s[k, k + a]
        out[a] = complex(np.trace(s, offset=a))
    return out


def aberg_unitary(U, D: int) -> np.ndarray:
    """Block matrix ``V(U)`` on system (x) window, system factor first."""
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    if U.shape != (d, d) or np.max(np.abs(U.conj().T @ U - np.eye(d))) > 1e-10:
        raise ValueError("target must be a square unitary")
    if D <= 2 * (d - 1):
        raise ValueError(f"window of {D} levels too small for a {d}-level system")
    V = np.zeros((d * D, d * D), dtype=complex)
    for j in range(d):
        for k in range(d):
            if U[j, k] != 0:
                V[j * D:(j + 1) * D, k * D:(k + 1) * D] = U[j, k] * shift_operator(D, k - j)
    return V


def energy_commutator(V, d: int, ancilla: LadderAncilla, interior_only: bool = True) -> float:
    """Largest entry of ``[V, H_S + H_A]``, optionally restricted to non-guard levels."""
    H = tensor(np.diag(np.arange(d, dtype=float)), np.eye(ancilla.D)) + tensor(np.eye(d), ancilla.hamiltonian)
    C = V @ H - H @ V
    if interior_only:
        keep = np.ones(d * ancilla.D, dtype=bool)
        for j in range(d):
            keep[j * ancilla.D] = keep[(j + 1) * ancilla.D - 1] = False
        C = C[np.ix_(keep, keep)]
    return float(np.max(np.abs(C)))


@dataclass
class AbergConfig:
    """Protocol parameters.

    ``N`` systems of dimension ``d`` start in ``|0>``; the ancilla starts in
    ``|eta_M^l>`` unless ``ancilla_ket`` is given (a vector over the window).
    """

    d: int = 2
    N: int = 1
    U: np.ndarray = field(default_factory=lambda: HADAMARD.copy())
    M: int = 4
    l: int = 0
    D: int | None = None
    ancilla_ket: np.ndarray | None = None

    def __post_init__(self):
        self.U = np.asarray(self.U, dtype=complex)
        if self.U.shape != (self.d, self.d):
            raise ValueError(f"U must be {self.d}x{self.d}")
        if np.max(np.abs(self.U.conj().T @ self.U - np.eye(self.d))) > 1e-10:
            raise ValueError("U is not unitary")
        if self.N < 1 or self.M < 1:
            raise ValueError("N and M must be positive")
        need = window_size(self.M, self.N, self.d)
        if self.D is None:
            self.D = need
        elif self.D < need:
            raise ValueError(f"window of {self.D} levels is smaller than the required {need}")

    @property
    def ancilla(self) -> LadderAncilla:
        base = LadderAncilla.for_protocol(self.M, self.l, self.N, self.d)
        return LadderAncilla(self.D, base.offset)

    def initial_ancilla(self) -> np.ndarray:
        if self.ancilla_ket is not None:
            v = np.asarray(self.ancilla_ket, dtype=complex)
            if v.shape != (self.D,):
                raise ValueError("ancilla_ket must live on the window")
            return v / np.linalg.norm(v)
        return eta_vector(self.M, self.l, self.ancilla)


@dataclass
class ProtocolRun:
    config: AbergConfig
    joint_ket: np.ndarray
    # system marginal of S_m right after step m
    step_marginals: list

    @property
    def dims(self) -> tuple:
        return (self.config.d,) * self.config.N + (self.config.D,)

    def _amplitudes(self) -> np.ndarray:
        c = self.config
        return self.joint_ket.reshape(c.d ** c.N, c.D)

    @property
    def joint_state(self) -> DensityMatrix:
        return DensityMatrix.from_ket(self.joint_ket)

    @property
    def system_state(self) -> DensityMatrix:
        a = self._amplitudes()
        return DensityMatrix(a @ a.conj().T)

    @property
    def ancilla_state(self) -> DensityMatrix:
        a = self._amplitudes()
        return DensityMatrix(a.T @ a.conj())

    @property
    def marginals(self) -> list[DensityMatrix]:
        rho = self.system_state
        dims = (self.config.d,) * self.config.N
        return [partial_trace(rho, dims, [m]) for m in range(self.config.N)]


def _check_guards(psi: np.ndarray, D: int, step: int) -> None:
    amp = psi.reshape(-1, D)
    edge = float(np.max(np.abs(amp[:, [0, D - 1]])))
    if edge > GUARD_TOL:
        raise WindowOverflowError(f"step {step}: amplitude {edge:.3e} on a guard level")


def run_protocol(cfg: AbergConfig, system_ket=None) -> ProtocolRun:
    """Apply ``V(U)`` to ``(S_m, A)`` for ``m = 1..N`` in order.

    ``system_ket`` overrides the default ``|0...0>`` system input.
    """
    d, N, D = cfg.d, cfg.N, cfg.D
    V = aberg_unitary(cfg.U, D).reshape(d, D, d, D)
    if system_ket is None:
        sys_vec = np.zeros(d ** N, dtype=complex)
        sys_vec[0] = 1.0
    else:
        sys_vec = np.asarray(system_ket, dtype=complex).ravel()
        sys_vec = sys_vec / np.linalg.norm(sys_vec)
    psi = np.kron(sys_vec, cfg.initial_ancilla())
    _check_guards(psi, D, 0)
    step_marginals = []
    for m in range(N):
        t = psi.reshape(d ** m, d, d ** (N - m - 1), D)
        t = np.einsum("jakb,xkyb->xjya", V, t)
        psi = t.reshape(-1)
        _check_guards(psi, D, m + 1)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > NORM_TOL:
            raise WindowOverflowError(f"step {m + 1}: norm drifted to {norm!r}")
        amp = psi.reshape(d ** m, d, -1)
        rho_m = np.einsum("xjr,xkr->jk", amp, amp.conj())
        step_marginals.append(DensityMatrix(rho_m))
    return ProtocolRun(cfg, psi, step_marginals)


class MomentChannel:
    """System map determined by the ancilla shift moments.

    ``E(rho)_{jm} = sum_{kl} mu(m - l + k - j) U_jk rho_kl conj(U_ml)`` with
    ``mu(a) = Tr[Delta^a sigma]``.
    """

    def __init__(self, U, moment_table: dict[int, complex]):
        self.U = np.asarray(U, dtype=complex)
        d = self.U.shape[0]
        self.d = d
        need = range(-2 * (d - 1), 2 * (d - 1) + 1)
        missing = [a for a in need if a not in moment_table]
        if missing:
            raise ValueError(f"missing moments for shifts {missing}")
        j, k, l, m = np.meshgrid(*(np.arange(d),) * 4, indexing="ij")
        shift = m - l + k - j
        self.kernel = np.vectorize(lambda a: moment_table[int(a)], otypes=[complex])(shift)
        self.moment_table = dict(moment_table)

    def __call__(self, rho) -> np.ndarray:
        r = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
        U = self.U
        return np.einsum("jklm,jk,kl,ml->jm", self.kernel, U, r, U.conj())

    def choi(self) -> np.ndarray:
        d = self.d
        C = np.zeros((d * d, d * d), dtype=complex)
        for k in range(d):
            for l in range(d):
                unit = np.zeros((d, d), dtype=complex)
                unit[k, l] = 1.0
                C += np.kron(unit, self(unit))
        return C

    def kraus(self, tol: float = 1e-13) -> list[np.ndarray]:
        """Kraus operators from the Choi matrix (requires complete positivity)."""
        w, v = np.linalg.eigh(self.choi())
        if w[0] < -1e-10:
            raise ValueError(f"moment table does not define a CP map (Choi eigenvalue {w[0]:.3e})")
        d = self.d
        ops = []
        for lam, vec in zip(w, v.T):
            if lam > tol:
                # vec = sum_{k,j} K_jk |k>|j>
                ops.append(np.sqrt(lam) * vec.reshape(d, d).T)
        return ops


def reduced_channel(U, moment_source) -> MomentChannel:
    """Reduced system channel from a moment table, ancilla ket/matrix, or ``M``.

    An integer is read as the uniform ``eta_M`` resource.
    """
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    span = range(-2 * (d - 1), 2 * (d - 1) + 1)
    if isinstance(moment_source, (int, np.integer)):
        table = {a: complex(eta_moment(int(moment_source), a)) for a in span}
    elif isinstance(moment_source, dict):
        table = {int(a): complex(v) for a, v in moment_source.items()}
    else:
        table = moments(moment_source, span)
    return MomentChannel(U, table)


def catalytic_check(cfg: AbergConfig, system_ket=None):
    """Shift moments of the ancilla before and after one protocol step.

    Returns ``(before, after, max_diff)`` over ``|a| <= 2(d-1)``.
    """
    one = AbergConfig(cfg.d, 1, cfg.U, cfg.M, cfg.l, cfg.D, cfg.ancilla_ket)
    if system_ket is not None:
        system_ket = np.asarray(system_ket, dtype=complex).ravel()[: cfg.d]
    run = run_protocol(one, system_ket)
    span = range(-2 * (cfg.d - 1), 2 * (cfg.d - 1) + 1)
    before = moments(one.initial_ancilla(), span)
    after = moments(run.ancilla_state.matrix, span)
    diff = max(abs(before[a] - after[a]) for a in span)
    return before, after, float(diff)


def two_qubit_closed_form(M: int) -> np.ndarray:
    a1, a2 = alphas(M)
    return 0.25 * np.array([
        [1, a1, a1, a2],
        [a1, 1, 1, a1],
        [a1, 1, 1, a1],
        [a2, a1, a1, 1],
    ], dtype=complex)


def two_qubit_family(M: int, l: int = 0):
    """Two-qubit output of two Hadamard steps: ``(simulated, closed_form)``."""
    run = run_protocol(AbergConfig(d=2, N=2, U=HADAMARD, M=M, l=l))
    return run.system_state, two_qubit_closed_form(M)


_QUBIT_H = np.diag([0.0, 1.0])


@dataclass(frozen=True)
class Fig1Row:
    M: int
    global_value: float
    local_sum: float
    gap: float


def fig1_sweep(M_values: Iterable[int], f: MonotoneFunction | None = None,
               simulate: bool = False) -> list[Fig1Row]:
    """Superadditivity gap of the two-qubit family for each ``M``.

    Uses the closed-form matrix unless ``simulate`` is set.
    """
    f = wigner_yanase() if f is None else f
    rows = []
    for M in M_values:
        M = int(M)
        if M < 1:
            raise ValueError("M must be at least 1")
        rho = two_qubit_family(M)[0] if simulate else DensityMatrix(two_qubit_closed_form(M))
        g: GapResult = superadditivity_gap(rho, [_QUBIT_H, _QUBIT_H], (2, 2), f)
        rows.append(Fig1Row(M, g.global_value, g.local_sum, g.gap))
    return rows


# --- sector-compressed representation ---------------------------------------
#
# With every system starting in |0> and the ancilla in a state with moments
# mu(a), N steps give the system state
#     rho_S = sum_{w, w'} mu(w' - w) |psi_w><psi_w'|,
#     |psi_w> = sum_{x : sum(x) = w} prod_m u_{x_m} |x>,   u = U|0>.
# Grouping the N systems into blocks, each block's |psi^{(b)}_w> are
# orthogonal across w and span an H-invariant subspace, so rho_S is carried
# by the block-energy basis without loss. Skew informations and block
# marginals are unchanged by this isometric, energy-preserving encoding.


def sector_weights(U, m: int) -> np.ndarray:
    """Norms ``||psi_w||^2``, ``w = 0..m(d-1)``, for a block of ``m`` systems."""
    p = np.abs(np.asarray(U, dtype=complex)[:, 0]) ** 2
    out = np.array([1.0])
    for _ in range(m):
        out = np.convolve(out, p)
    return out


def _block_matrix(U, moment_fn, sizes):
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    if isinstance(moment_fn, (int, np.integer)):
        M = int(moment_fn)
        moment_fn = lambda a: eta_moment(M, a)  # noqa: E731
    sizes = [int(s) for s in sizes]
    if not sizes or any(s < 0 for s in sizes) or sum(sizes) < 1:
        raise ValueError("block sizes must be nonnegative with a positive total")
    sizes = [s for s in sizes if s > 0]
    dims = tuple(s * (d - 1) + 1 for s in sizes)
    if int(np.prod(dims)) > MAX_BLOCK_DIM:
        raise ValueError(f"block dimensions {dims} exceed {MAX_BLOCK_DIM}")
    amp = np.array([1.0])
    energy = np.array([0])
    for s in sizes:
        sw = np.sqrt(sector_weights(U, s))
        amp = np.kron(amp, sw)
        energy = (energy[:, None] + np.arange(len(sw))[None, :]).ravel()
    shift = energy[None, :] - energy[:, None]
    table = {int(a): complex(moment_fn(int(a))) for a in np.unique(shift)}
    mu = np.vectorize(table.__getitem__, otypes=[complex])(shift)
    h_list = [np.diag(np.arange(dim, dtype=float)) for dim in dims]
    return mu * np.outer(amp, amp), dims, h_list


def block_state(U, moment_fn: Callable[[int], complex] | int, sizes: Sequence[int]):
    """Protocol output on ``sum(sizes)`` systems, grouped into blocks.

    Block ``b`` of ``m_b`` systems is encoded on ``m_b (d-1) + 1`` levels
    labelled by its energy. ``moment_fn`` maps a shift to its ancilla moment;
    an integer ``M`` stands for ``eta_M``. Zero-size blocks are dropped.

    Returns ``(state, dims, local_observables)``.
    """
    rho, dims, h_list = _block_matrix(U, moment_fn, sizes)
    return DensityMatrix(rho), dims, h_list


def unit_marginals(U, moment_fn, N: int) -> list[DensityMatrix]:
    """Reduced state of every single system ``j = 0..N-1`` after ``N`` steps."""
    out = []
    for j in range(N):
        sizes = [j, 1, N - j - 1]
        rho, dims, _ = _block_matrix(U, moment_fn, sizes)
        pos = 0 if j == 0 else 1
        out.append(DensityMatrix(partial_trace_array(rho, dims, [pos])))
    return out


@dataclass
class MultipartiteResult:
    M: int
    f_id: str
    i_ancilla: float
    i_local: float
    n_star: int | None
    ratio_curve: list
    global_curve: list = field(default_factory=list)


def multipartite_violation(M: int, f: MonotoneFunction | None = None, N_max: int = 64,
                           U=HADAMARD, global_N: Iterable[int] | None = None) -> MultipartiteResult:
    """Find the smallest ``N`` with ``N * I_local > I_ancilla``.

    ``I_local`` is taken from the single-step marginal, which every system
    shares by catalytic repeatability. ``ratio_curve`` holds
    ``(N, N * I_local / I_ancilla)``; ``global_curve`` holds
    ``(N, I(rho_S))`` for the requested ``global_N`` (all ``N <= N_max`` that
    fit the compressed representation by default).
    """
    f = wigner_yanase() if f is None else f
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    cfg = AbergConfig(d=d, N=1, U=U, M=M)
    anc = cfg.ancilla
    i_anc = skew_value(DensityMatrix.from_ket(eta_vector(M, cfg.l, anc)), anc.hamiltonian, f)
    run = run_protocol(cfg)
    i_loc = skew_value(run.step_marginals[0], np.diag(np.arange(d, dtype=float)), f)
    n_star = None
    curve = []
    for N in range(1, N_max + 1):
        curve.append((N, N * i_loc / i_anc))
        if n_star is None and N * i_loc > i_anc:
            n_star = N
    if global_N is None:
        global_N = [N for N in range(1, N_max + 1) if N * (d - 1) + 1 <= MAX_BLOCK_DIM]
    glob = []
    for N in global_N:
        rho, dims, hs = block_state(U, M, [N])
        glob.append((N, skew_value(rho, hs[0], f)))
    return MultipartiteResult(M, f.label, i_anc, i_loc, n_star, curve, glob)


@dataclass
class WitnessReport:
    k: int
    depth: int
    N: int
    M: int
    f_id: str
    global_value: float
    i_ancilla: float
    # level t: sum over the k**t blocks of size k**(depth - t)
    level_sums: list
    local_sum: float
    ratio: float
    ratio_to_ancilla: float
    slopes: list
    slope_spread: float


def optimality_witness(k: int, depth: int, M: int, f: MonotoneFunction | None = None,
                       U=HADAMARD) -> WitnessReport:
    """Hierarchical split of the ``N = k**depth`` protocol output.

    At each level every block is divided into ``k`` equal blocks. Blocks at
    one level share a marginal (the output is permutation symmetric), so a
    level's sum is ``k**t`` times one block's skew information. ``ratio`` is
    ``sum of unit-system values / global value``; growth proportional to
    ``N`` defeats any constant larger than ``1/k``.
    """
    f = wigner_yanase() if f is None else f
    if k < 2 or depth < 0:
        raise ValueError("need k >= 2 and depth >= 0")
    U = np.asarray(U, dtype=complex)
    N = k ** depth
    per_block = {}
    for t in range(depth + 1):
        size = k ** (depth - t)
        rho, _, hs = block_state(U, M, [size])
        per_block[size] = skew_value(rho, hs[0], f)
    level_sums = [k ** t * per_block[k ** (depth - t)] for t in range(depth + 1)]
    global_value = level_sums[0]
    h_unit = np.diag(np.arange(U.shape[0], dtype=float))
    # measured per-system sums for every N' = k**t, divided by N'
    slopes = []
    for t in range(depth + 1):
        n = k ** t
        total = sum(skew_value(r, h_unit, f) for r in unit_marginals(U, M, n))
        slopes.append(total / n)
    spread = max(slopes) - min(slopes)
    local_sum = N * slopes[-1]
    cfg = AbergConfig(d=U.shape[0], N=1, U=U, M=M)
    anc = cfg.ancilla
    i_anc = skew_value(DensityMatrix.from_ket(eta_vector(M, cfg.l, anc)), anc.hamiltonian, f)
    return WitnessReport(k, depth, N, M, f.label, global_value, i_anc, level_sums,
                         local_sum, local_sum / global_value, local_sum / i_anc, slopes, spread)
