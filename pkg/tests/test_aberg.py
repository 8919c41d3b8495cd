import numpy as np
import pytest

from skewasym import aberg
from skewasym.aberg import (
    HADAMARD,
    AbergConfig,
    LadderAncilla,
    WindowOverflowError,
    aberg_unitary,
    alphas,
    block_state,
    catalytic_check,
    energy_commutator,
    eta_moment,
    eta_vector,
    fig1_sweep,
    moments,
    multipartite_violation,
    optimality_witness,
    reduced_channel,
    run_protocol,
    shift_operator,
    two_qubit_closed_form,
    two_qubit_family,
    unit_marginals,
    window_size,
)
from skewasym.monotone import registered, sld, wigner_yanase, wyd
from skewasym.qmat import DensityMatrix, partial_trace, projector
from skewasym.randoms import random_state, random_unitary
from skewasym.skewinfo import skew_value

from conftest import NUMBER, PLUS


def test_shift_operator_examples():
    np.testing.assert_array_equal(shift_operator(3, 0), np.eye(3))
    np.testing.assert_array_equal(shift_operator(3, 1), [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    np.testing.assert_array_equal(shift_operator(4, -2) @ np.eye(4)[3], np.eye(4)[1])
    with pytest.raises(ValueError):
        shift_operator(3, 3)


def test_shift_moves_eta():
    anc = LadderAncilla(12, -3)
    np.testing.assert_allclose(shift_operator(12, 2) @ eta_vector(4, 0, anc), eta_vector(4, 2, anc))
    np.testing.assert_allclose(shift_operator(12, -1) @ eta_vector(4, 0, anc), eta_vector(4, -1, anc))


def test_ladder_ancilla():
    anc = LadderAncilla.for_protocol(M=4, l=0, N=2, d=2)
    assert anc.D == window_size(4, 2, 2) == 10
    np.testing.assert_array_equal(np.diag(anc.hamiltonian), anc.levels)
    assert anc.index(0) == 3
    with pytest.raises(WindowOverflowError):
        anc.index(anc.offset + anc.D)


def test_eta_vector_and_guards():
    anc = LadderAncilla(6, 0)
    v = eta_vector(4, 1, anc)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    np.testing.assert_allclose(v[1:5], 0.5)
    with pytest.raises(WindowOverflowError):
        eta_vector(4, 0, anc)
    with pytest.raises(ValueError):
        eta_vector(0, 1, anc)


def test_eta_moments():
    anc = LadderAncilla(10, -4)
    eta = eta_vector(4, 0, anc)
    mom = moments(eta, range(-5, 6))
    for a, v in mom.items():
        assert v == pytest.approx(max(4 - abs(a), 0) / 4, abs=1e-15)
    assert eta_moment(4, 0) == 1 and eta_moment(4, 1) == 0.75 and eta_moment(4, 2) == 0.5
    assert alphas(4) == (0.75, 0.5)
    assert alphas(1) == (0.0, 0.0) and alphas(2) == (0.5, 0.0)
    with pytest.raises(ValueError):
        moments(eta, [10])


def test_moments_of_mixed_state():
    sigma = np.diag([0.5, 0.5]).astype(complex)
    sigma[1, 0] = sigma[0, 1] = 0.25
    mom = moments(sigma, [-1, 0, 1])
    assert mom[0] == 1 and mom[1] == 0.25 and mom[-1] == 0.25


def test_aberg_unitary_trivial_cases(rng):
    np.testing.assert_array_equal(aberg_unitary(np.eye(2), 5), np.eye(10))
    phases = np.diag(np.exp(1j * rng.random(3)))
    np.testing.assert_allclose(aberg_unitary(phases, 8), np.kron(phases, np.eye(8)))


def test_aberg_unitary_block_structure():
    V = aberg_unitary(HADAMARD, 5).reshape(2, 5, 2, 5)
    # <1|U|0> block moves the ancilla one level down
    np.testing.assert_allclose(V[1, :, 0, :], HADAMARD[1, 0] * shift_operator(5, -1))
    np.testing.assert_allclose(V[0, :, 1, :], HADAMARD[0, 1] * shift_operator(5, 1))


@pytest.mark.parametrize("d", [2, 3])
def test_energy_commutator(rng, d):
    u = HADAMARD if d == 2 else random_unitary(d, rng)
    cfg = AbergConfig(d=d, N=2, U=u, M=4)
    assert energy_commutator(aberg_unitary(u, cfg.D), d, cfg.ancilla) <= 1e-10


def test_config_validation():
    with pytest.raises(ValueError, match="unitary"):
        AbergConfig(U=np.ones((2, 2)))
    with pytest.raises(ValueError, match="window"):
        AbergConfig(N=2, M=4, D=5)
    with pytest.raises(ValueError):
        AbergConfig(M=0)


def test_single_step_marginal():
    run = run_protocol(AbergConfig(N=1, M=4))
    a1 = 0.75
    np.testing.assert_allclose(run.system_state.matrix, 0.5 * np.array([[1, a1], [a1, 1]]), atol=1e-15)


def test_two_step_joint_ket():
    cfg = AbergConfig(N=2, M=4, l=0)
    run = run_protocol(cfg)
    anc = cfg.ancilla
    e = [eta_vector(4, -i, anc) for i in range(3)]
    q = np.eye(2)
    expect = 0.5 * (np.kron(np.kron(q[0], q[0]), e[0]) + np.kron(np.kron(q[0], q[1]), e[1])
                    + np.kron(np.kron(q[1], q[0]), e[1]) + np.kron(np.kron(q[1], q[1]), e[2]))
    np.testing.assert_allclose(run.joint_ket, expect, atol=1e-15)


def test_identity_unitary_leaves_state(rng):
    cfg = AbergConfig(N=3, U=np.eye(2), M=3)
    ket = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    ket /= np.linalg.norm(ket)
    run = run_protocol(cfg, ket)
    np.testing.assert_allclose(run.joint_ket, np.kron(ket, cfg.initial_ancilla()), atol=1e-15)


def test_protocol_preserves_norm_and_marginals():
    run = run_protocol(AbergConfig(N=4, M=5))
    assert abs(np.linalg.norm(run.joint_ket) - 1) <= 1e-12
    first = run.step_marginals[0].matrix
    for m in run.step_marginals[1:] + run.marginals:
        np.testing.assert_allclose(m.matrix, first, atol=1e-12)


def test_small_window_overflows():
    # an ancilla ket touching the lowest level is caught before the first step
    cfg = AbergConfig(N=1, M=2, ancilla_ket=np.eye(window_size(2, 1, 2))[0])
    with pytest.raises(WindowOverflowError):
        run_protocol(cfg)


def test_reduced_channel_perfect_moments(rng):
    u = random_unitary(3, rng)
    ones = {a: 1.0 for a in range(-4, 5)}
    rho = random_state(3, rng)
    np.testing.assert_allclose(reduced_channel(u, ones)(rho), u @ rho.matrix @ u.conj().T, atol=1e-14)


def test_reduced_channel_dephasing(rng):
    u = random_unitary(3, rng)
    delta = {a: float(a == 0) for a in range(-4, 5)}
    ch = reduced_channel(u, delta)
    # energy-diagonal inputs, such as the protocol's |0>, come out fully dephased
    rho = np.diag(rng.dirichlet(np.ones(3)))
    rotated = u @ rho @ u.conj().T
    np.testing.assert_allclose(ch(rho), np.diag(np.diag(rotated)), atol=1e-14)
    # in general only terms with m - j = l - k survive
    rho = random_state(3, rng).matrix
    expect = np.zeros((3, 3), dtype=complex)
    for j, k, l, m in np.ndindex(3, 3, 3, 3):
        if m - j == l - k:
            expect[j, m] += u[j, k] * rho[k, l] * np.conj(u[m, l])
    np.testing.assert_allclose(ch(rho), expect, atol=1e-14)


def test_reduced_channel_eta_hadamard():
    out = reduced_channel(HADAMARD, 4)(projector([1, 0]))
    np.testing.assert_allclose(out, [[0.5, 0.375], [0.375, 0.5]], atol=1e-15)


def test_reduced_channel_missing_moments():
    with pytest.raises(ValueError):
        reduced_channel(HADAMARD, {0: 1.0})


@pytest.mark.parametrize("d,M", [(2, 1), (2, 6), (3, 3), (3, 7)])
def test_reduced_channel_vs_simulation(rng, d, M):
    u = HADAMARD if d == 2 else random_unitary(d, rng)
    ch = reduced_channel(u, M)
    for _ in range(3):
        ket = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        ket /= np.linalg.norm(ket)
        run = run_protocol(AbergConfig(d=d, N=1, U=u, M=M), ket)
        np.testing.assert_allclose(ch(projector(ket)), run.system_state.matrix, atol=1e-10)


def test_moment_channel_kraus_and_choi():
    ch = reduced_channel(HADAMARD, 3)
    ks = ch.kraus()
    np.testing.assert_allclose(sum(k.conj().T @ k for k in ks), np.eye(2), atol=1e-12)
    rho = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    np.testing.assert_allclose(sum(k @ rho @ k.conj().T for k in ks), ch(rho), atol=1e-12)
    assert np.min(np.linalg.eigvalsh(ch.choi())) >= -1e-12


def test_catalytic_check_examples():
    before, after, diff = catalytic_check(AbergConfig(N=1, M=4))
    assert before[1] == pytest.approx(0.75) and after[1] == pytest.approx(0.75)
    assert diff <= 1e-12
    assert catalytic_check(AbergConfig(U=np.eye(2), M=4))[2] <= 1e-15


def test_catalytic_check_random(rng):
    for d in (2, 3):
        cfg = AbergConfig(d=d, U=random_unitary(d, rng), M=5)
        assert catalytic_check(cfg)[2] <= 1e-12


@pytest.mark.parametrize("M", [1, 2, 3, 4, 7, 50])
def test_two_qubit_family_closed_form(M):
    sim, closed = two_qubit_family(M)
    np.testing.assert_allclose(sim.matrix, closed, atol=1e-12)


def test_two_qubit_family_limits():
    closed = two_qubit_closed_form(1)
    np.testing.assert_allclose(closed, 0.25 * np.array([[1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]]))
    plus_plus = projector(np.kron(PLUS, PLUS))
    assert np.max(np.abs(two_qubit_closed_form(10 ** 4) - plus_plus)) <= 3e-4


def test_two_qubit_marginal_offdiagonal():
    # partial trace of the 4x4 family gives alpha_1 / 2 as the matrix entry
    for M in (2, 4, 9):
        red = partial_trace(two_qubit_closed_form(M), (2, 2), [0]).matrix
        assert red[0, 1] == pytest.approx(alphas(M)[0] / 2, abs=1e-15)


def test_fig1_rows():
    rows = fig1_sweep(range(1, 8))
    assert rows[0].M == 1 and abs(rows[0].gap) <= 1e-10
    assert all(r.gap < 0 for r in rows[1:])
    assert min(rows, key=lambda r: r.gap).M == 4
    for r in rows:
        assert r.gap == pytest.approx(r.global_value - r.local_sum)


def test_fig1_closed_form_matches_simulation():
    for a, b in zip(fig1_sweep([2, 4, 6]), fig1_sweep([2, 4, 6], simulate=True)):
        assert abs(a.gap - b.gap) <= 1e-10


def test_fig1_local_value_by_hand():
    # marginal (1/2)[[1, a], [a, 1]] has eigenvalues (1 +- a)/2 in the |+->
    # basis and |<+|n|->|^2 = 1/4, so I_WY = (sqrt(p) - sqrt(q))^2 / 4
    M = 4
    a = alphas(M)[0]
    p, q = (1 + a) / 2, (1 - a) / 2
    local = (np.sqrt(p) - np.sqrt(q)) ** 2 / 4
    row = fig1_sweep([M])[0]
    assert row.local_sum == pytest.approx(2 * local, abs=1e-14)


def test_fig1_rejects_bad_m():
    with pytest.raises(ValueError):
        fig1_sweep([0])


def test_block_state_matches_full_simulation():
    for N in (2, 3, 4):
        run = run_protocol(AbergConfig(N=N, M=3))
        full = run.system_state
        rho, dims, hs = block_state(HADAMARD, 3, [N])
        h_full = np.diag([bin(x).count("1") for x in range(2 ** N)]).astype(float)
        for f in (wigner_yanase(), sld(), wyd(0.3)):
            assert skew_value(rho, hs[0], f) == pytest.approx(skew_value(full, h_full, f), abs=1e-12)
        marg = unit_marginals(HADAMARD, 3, N)
        for j, m in enumerate(run.marginals):
            np.testing.assert_allclose(marg[j].matrix, m.matrix, atol=1e-12)


def test_block_state_drops_empty_blocks():
    rho, dims, hs = block_state(HADAMARD, 4, [0, 2, 0])
    assert dims == (3,) and len(hs) == 1
    with pytest.raises(ValueError):
        block_state(HADAMARD, 4, [0])
    with pytest.raises(ValueError):
        block_state(HADAMARD, 4, [40, 40, 40])


def test_sector_weights_binomial():
    np.testing.assert_allclose(aberg.sector_weights(HADAMARD, 4), np.array([1, 4, 6, 4, 1]) / 16)


def test_multipartite_m8():
    res = multipartite_violation(8, wigner_yanase(), N_max=48, global_N=(1, 2, 8, 32))
    assert res.i_ancilla == pytest.approx(63 / 12, abs=1e-10)
    assert res.n_star is not None and res.n_star * res.i_local > 5.25
    assert (res.n_star - 1) * res.i_local <= 5.25
    assert all(g <= 5.25 + 1e-9 for _, g in res.global_curve)
    ratios = np.array([r for _, r in res.ratio_curve])
    np.testing.assert_allclose(np.diff(ratios), ratios[0], rtol=1e-9)


def test_multipartite_identity_unitary():
    res = multipartite_violation(5, wigner_yanase(), N_max=10, U=np.eye(2), global_N=(1, 4))
    assert res.i_local == 0.0 and res.n_star is None


def test_ancilla_value_is_uniform_variance():
    for f in registered():
        for M in (2, 5):
            res = multipartite_violation(M, f, N_max=1, global_N=())
            assert res.i_ancilla == pytest.approx((M * M - 1) / 12, abs=1e-10)


def test_optimality_witness_k2_depth3():
    rep = optimality_witness(2, 3, 8, wigner_yanase())
    assert rep.N == 8
    assert rep.ratio > 1
    assert rep.slope_spread <= 1e-9
    assert rep.global_value <= rep.i_ancilla + 1e-9
    assert rep.level_sums[0] == pytest.approx(rep.global_value)
    # the sum over the finest level is the local sum
    assert rep.level_sums[-1] == pytest.approx(rep.local_sum, abs=1e-12)


def test_optimality_witness_depth0():
    rep = optimality_witness(2, 0, 8)
    assert rep.N == 1
    assert rep.ratio == pytest.approx(1.0)
    assert rep.ratio_to_ancilla <= 1.0
    with pytest.raises(ValueError):
        optimality_witness(1, 2, 8)


def test_gap_decays_monotonically():
    gaps = np.array([r.gap for r in fig1_sweep(range(1, 201))])
    # from M0 = 4 on the gap rises towards zero at every step
    assert np.all(np.diff(gaps[3:]) > 0)
    assert np.argmin(gaps) == 3
