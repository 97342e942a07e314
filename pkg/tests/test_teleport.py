"""Teleportation over the psi+ channel and the corrupted-channel decomposition."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from wshare.statevec import (
    Basis,
    StateVector,
    enumerate_qubit,
    make_basis_state,
    make_message_state,
    reduced_density,
    reduced_fidelity,
    tensor,
)
from wshare.teleport import (
    apply_correction,
    build_correction_table,
    corrupted_channel,
    ema_decomposition,
    random_message,
    teleport,
    teleport_branches,
)

RS2 = 1 / np.sqrt(2)


def psi_plus(labels=("a", "b")):
    amps = np.zeros(4, dtype=complex)
    amps[[1, 2]] = RS2
    return StateVector(amps, labels)


def test_correction_table_entries():
    # Derived, then frozen here: the psi+ channel swaps the roles that the
    # textbook phi+ channel assigns to I/X and Z/XZ.
    table = build_correction_table().by_name
    assert table == {"psi+": "I", "psi-": "Z", "phi+": "X", "phi-": "XZ"}


def test_corrections_are_complete():
    table = build_correction_table()
    assert set(table.by_name) == {"psi+", "psi-", "phi+", "phi-"}
    assert set(table.by_name.values()) <= {"I", "X", "Z", "XZ"}


def test_faithful_teleportation_all_branches():
    rng = np.random.default_rng(42)
    for _ in range(100):
        msg = random_message(rng)
        results = teleport_branches(msg, psi_plus())
        assert len(results) == 4
        for res in results:
            assert res.probability == pytest.approx(0.25, abs=1e-12)
            assert res.fidelity == pytest.approx(1.0, abs=1e-12)


def test_teleport_basis_message():
    rng = np.random.default_rng(7)
    res = teleport(make_message_state(1, 0), psi_plus(), rng)
    assert res.fidelity == pytest.approx(1.0, abs=1e-12)
    # Bob's qubit is exactly |0>
    assert reduced_fidelity(res.post_state, "b", make_basis_state([0], ["r"])) == pytest.approx(
        1.0, abs=1e-12
    )


def test_teleport_sampled_outcomes_cover_all_four():
    rng = np.random.default_rng(123)
    msg = make_message_state(0.6, 0.8)
    seen = {teleport(msg, psi_plus(), rng).outcome_name for _ in range(200)}
    assert seen == {"psi+", "psi-", "phi+", "phi-"}


def test_teleport_through_larger_register():
    # The pair may sit inside a bigger register (a stored ancilla rides along).
    extra = tensor(psi_plus(("a", "e")), make_basis_state([0], ["b"]))
    # entangled with e, not b: fidelity on b is that of a bystander qubit
    rng = np.random.default_rng(5)
    res = teleport(make_message_state(0.6, 0.8), extra, rng)
    assert res.post_state.num_qubits == 4  # m, a, e, b all retained
    assert 0.0 <= res.fidelity <= 1.0


def test_teleport_rejects_missing_labels():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        teleport(make_message_state(1, 0), psi_plus(("x", "y")), rng)


def test_no_signaling():
    # Before the classical bits arrive, Bob's reduced state carries no
    # trace of the message: it is I/2 regardless of (a, b).
    for a, b in [(1, 0), (0.6, 0.8), (RS2, RS2 * 1j)]:
        joint = tensor(make_message_state(a, b), psi_plus())
        rho = reduced_density(joint, "b")
        assert_allclose(rho, np.eye(2) / 2, atol=1e-12)


def test_apply_correction_names():
    s = make_message_state(0.6, 0.8)
    assert_allclose(apply_correction(s, "m", "I").amplitudes, [0.6, 0.8])
    with pytest.raises(ValueError):
        apply_correction(s, "m", "ZX")


# ---------------------------------------------------------------------------
# corrupted-channel decomposition


def test_decomposition_weights_and_branches():
    outs = ema_decomposition(0.6, 0.8)
    assert [o.name for o, _ in outs] == ["psi+", "psi-", "phi+", "phi-"]
    for _, residual in outs:
        assert residual.labels == ("b", "e")
    probs = [o.probability for o, _ in outs]
    assert_allclose(probs, [0.25] * 4, atol=1e-12)
    res = {o.name: r.amplitudes for o, r in outs}
    assert_allclose(res["psi+"], [0.6, 0, 0, 0.8], atol=1e-12)
    assert_allclose(res["psi-"], [0.6, 0, 0, -0.8], atol=1e-12)
    assert_allclose(res["phi+"], [0.8, 0, 0, 0.6], atol=1e-12)
    assert_allclose(res["phi-"], [-0.8, 0, 0, 0.6], atol=1e-12)


def test_decomposition_reconstructs_joint():
    rng = np.random.default_rng(99)
    for _ in range(20):
        msg = random_message(rng)
        a, b = msg.amplitudes
        joint = tensor(make_message_state(a, b), corrupted_channel())
        rebuilt = np.zeros_like(joint.amplitudes)
        for outcome, residual in ema_decomposition(a, b):
            bell = np.zeros(4, dtype=complex)
            if outcome.name == "psi+":
                bell[[1, 2]] = RS2
            elif outcome.name == "psi-":
                bell[[1, 2]] = RS2, -RS2
            elif outcome.name == "phi+":
                bell[[0, 3]] = RS2
            else:
                bell[[0, 3]] = RS2, -RS2
            rebuilt += np.sqrt(outcome.probability) * np.kron(bell, residual.amplitudes)
        assert_allclose(rebuilt, joint.amplitudes, atol=1e-12)


def test_decomposition_basis_message_gives_product_branches():
    for outcome, residual in ema_decomposition(1, 0):
        # message |0>: every residual is a basis ket (|00> or |11>)
        assert np.sum(np.abs(residual.amplitudes) > 1e-12) == 1


def test_corrupted_channel_bob_fidelity():
    # Teleporting over the corrupted channel: Bob's expected fidelity drops
    # to |a|^4 + |b|^4 (averaged over the four equiprobable branches).
    for a, b in [(0.6, 0.8), (1.0, 0.0), (RS2, RS2)]:
        msg = make_message_state(a, b)
        results = teleport_branches(msg, corrupted_channel())
        expected = sum(r.probability * r.fidelity for r in results)
        assert expected == pytest.approx(abs(a) ** 4 + abs(b) ** 4, abs=1e-12)


def test_corrupted_channel_eavesdropper_collapse():
    # Once the interceptor Z-measures her ancilla, Bob's qubit is left in a
    # definite Z eigenstate (his outcomes become deterministic).
    rng = np.random.default_rng(17)
    msg = random_message(rng)
    res = teleport(msg, corrupted_channel(), rng)
    eve_branch = next(
        b for b in enumerate_qubit(res.post_state, "e", Basis.Z) if b.probability > 1e-12
    )
    rho_bob = reduced_density(eve_branch.post_state, "b")
    # pure and diagonal: a Z eigenstate
    assert_allclose(rho_bob @ rho_bob, rho_bob, atol=1e-12)
    assert abs(rho_bob[0, 1]) < 1e-12


def test_random_message_is_normalized():
    rng = np.random.default_rng(3)
    for _ in range(10):
        msg = random_message(rng)
        assert_allclose(np.sum(np.abs(msg.amplitudes) ** 2), 1, atol=1e-12)
