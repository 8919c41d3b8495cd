import numpy as np
import pytest

from skewasym.aberg import HADAMARD
from skewasym.covariant import (
    Instrument,
    QuantumChannel,
    apply,
    commuting_measurement,
    identity_channel,
    is_covariant,
    partial_trace_channel,
    selective_monotonicity_check,
    unitary_channel,
)
from skewasym.monotone import registered, wigner_yanase
from skewasym.qmat import DensityMatrix, embed_local_observables, partial_trace, projector
from skewasym.randoms import (
    random_commuting_kraus,
    random_commuting_unitary,
    random_covariant_kraus,
    random_ladder_observable,
    random_observable,
    random_state,
)
from skewasym.skewinfo import skew_value

from conftest import NUMBER, PLUS


def _dephasing(d):
    return QuantumChannel([projector(np.eye(d)[j]) for j in range(d)])


def test_channel_validation():
    with pytest.raises(ValueError, match="trace preserving"):
        QuantumChannel([np.eye(2) * 0.5])
    with pytest.raises(ValueError):
        QuantumChannel([])
    with pytest.raises(ValueError):
        QuantumChannel([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError, match="increase trace"):
        QuantumChannel([np.eye(2) * 1.5], trace_preserving=False)
    ch = QuantumChannel([np.eye(2) * 0.5], trace_preserving=False)
    assert ch.dim_in == ch.dim_out == 2


def test_apply_examples(rng):
    rho = random_state(3, rng)
    np.testing.assert_allclose(apply(identity_channel(3), rho), rho.matrix)
    np.testing.assert_allclose(apply(_dephasing(2), projector(PLUS)), np.eye(2) / 2, atol=1e-15)
    with pytest.raises(ValueError):
        apply(identity_channel(2), rho)


@pytest.mark.parametrize("drop_first", [False, True])
def test_partial_trace_channel_matches_qmat(rng, drop_first):
    rho = random_state(6, rng)
    if drop_first:
        ch = partial_trace_channel(3, 2, drop_first=True)
        expect = partial_trace(rho, (2, 3), [1]).matrix
    else:
        ch = partial_trace_channel(2, 3)
        expect = partial_trace(rho, (2, 3), [0]).matrix
    np.testing.assert_allclose(ch(rho), expect, atol=1e-14)


def test_partial_trace_is_covariant(rng):
    h1, h2 = random_observable(2, rng), random_observable(3, rng)
    ok, dev = is_covariant(partial_trace_channel(2, 3), embed_local_observables([h1, h2]).matrix, h1)
    assert ok and dev < 1e-12


def test_commuting_unitary_is_covariant(rng):
    h, energies, basis = random_ladder_observable(4, rng)
    u = random_commuting_unitary(energies, basis, rng)
    assert is_covariant(unitary_channel(u), h)[0]


def test_hadamard_is_not_covariant():
    ok, dev = is_covariant(unitary_channel(HADAMARD), NUMBER)
    assert not ok
    assert dev > 0.1


def test_is_covariant_dimension_check():
    with pytest.raises(ValueError):
        is_covariant(identity_channel(2), np.eye(3))


def test_generated_covariant_channels(rng):
    for d in (2, 3, 4, 6):
        h, energies, basis = random_ladder_observable(d, rng)
        ch = QuantumChannel(random_covariant_kraus(energies, basis, rng))
        assert is_covariant(ch, h)[0]


def test_commuting_measurement_accepts():
    h = np.diag([0.0, 1.0, 1.0, 2.0])
    proj = [np.diag([1.0, 0, 0, 0]), np.diag([0, 1.0, 1.0, 0]), np.diag([0, 0, 0, 1.0])]
    inst = commuting_measurement(proj, h)
    assert len(inst.branches) == 3
    # functions of H commute with H
    c, s = np.diag(np.cos(np.diag(h) * 0.3)), np.diag(np.sin(np.diag(h) * 0.3))
    assert len(commuting_measurement([c, s], h).branches) == 2


def test_commuting_measurement_rejects_hadamard():
    with pytest.raises(ValueError, match="operator 0"):
        commuting_measurement([HADAMARD], NUMBER)
    with pytest.raises(ValueError, match="operator 1"):
        commuting_measurement([np.diag([1.0, 0.0]), HADAMARD / np.sqrt(2)], NUMBER)


def test_commuting_measurement_rejects_incomplete():
    with pytest.raises(ValueError, match="trace-preserving"):
        commuting_measurement([np.diag([1.0, 0.0])], NUMBER)


def test_selective_examples(rng):
    rho = random_state(3, rng)
    h = np.diag([0.0, 1.0, 3.0])
    proj = [projector(np.eye(3)[j]) for j in range(3)]
    before, after, ok = selective_monotonicity_check(commuting_measurement(proj, h), rho, h)
    assert ok and after == 0.0 and before > 0
    ident = Instrument((identity_channel(3),))
    before, after, ok = selective_monotonicity_check(ident, rho, h, registered()[3])
    assert after == pytest.approx(before, abs=1e-14) and ok


def test_selective_skips_empty_branch():
    rho = projector([1.0, 0.0])
    proj = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    before, after, ok = selective_monotonicity_check(commuting_measurement(proj, NUMBER), rho, NUMBER)
    assert before == after == 0.0 and ok


def test_selective_rejects_noncovariant_branch():
    inst = Instrument((unitary_channel(HADAMARD),))
    with pytest.raises(ValueError, match="branch 0"):
        selective_monotonicity_check(inst, np.eye(2) / 2, NUMBER)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_monotonicity_under_covariant_operations(rng, d):
    for _ in range(10):
        h, energies, basis = random_ladder_observable(d, rng)
        rho = random_state(d, rng)
        ch = QuantumChannel(random_covariant_kraus(energies, basis, rng))
        out = DensityMatrix(apply(ch, rho))
        inst = commuting_measurement(random_commuting_kraus(energies, basis, rng), h)
        for f in registered():
            assert skew_value(out, h, f) <= skew_value(rho, h, f) + 1e-9
            assert selective_monotonicity_check(inst, rho, h, f)[2]


def test_commuting_measurement_preserves_expectation(rng):
    for d in (2, 4, 6):
        h, energies, basis = random_ladder_observable(d, rng)
        rho = random_state(d, rng)
        inst = commuting_measurement(random_commuting_kraus(energies, basis, rng), h)
        out = apply(inst.total_channel(), rho)
        assert abs(np.trace(out @ h) - np.trace(rho.matrix @ h)) <= 1e-10


def test_default_f_is_wy(rng):
    h = np.diag([0.0, 1.0])
    rho = random_state(2, rng)
    inst = Instrument((identity_channel(2),))
    assert selective_monotonicity_check(inst, rho, h)[0] == skew_value(rho, h, wigner_yanase())
