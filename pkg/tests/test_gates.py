"""Unit tests for target gates and fidelity metrics."""
import math

import numpy as np
import pytest

from conftest import random_unitary
from satdgates.errors import ContractViolation
from satdgates.gates import (GateKind, GateSpec, avg_gate_fidelity,
                             gate_from_name, ideal_gate, ideal_two_qubit,
                             ideal_unitary, initial_states,
                             state_avg_fidelity)
from satdgates.numkit import SIGMA_X, frobenius_distance


def test_named_gates():
    s = gate_from_name("s")
    assert s.kind is GateKind.UZ and s.gamma_g == math.pi / 2
    assert gate_from_name("not").kind is GateKind.UX
    assert gate_from_name("cs").kind.is_controlled
    assert gate_from_name("cnot").kind is GateKind.CONTROLLED_UX
    with pytest.raises(ContractViolation):
        gate_from_name("hadamard")
    with pytest.raises(ContractViolation):
        gate_from_name("custom")  # needs kind and gamma_g
    g = gate_from_name("custom", kind=GateKind.UZ, gamma_g=0.3)
    assert g.gamma_g == 0.3


def test_phase_angle_mapping():
    # slice opening angle phi2 = pi - gamma_g
    assert abs(gate_from_name("s").phi2 - math.pi / 2) < 1e-15
    assert abs(GateSpec(GateKind.UZ, 0.0).phi2 - math.pi) < 1e-15


def test_ideal_gate_examples():
    s = ideal_gate(gate_from_name("s"))
    assert np.allclose(s, np.diag([1j, -1j]), atol=1e-15)
    x = ideal_gate(gate_from_name("not"))
    assert np.allclose(x, 1j * SIGMA_X, atol=1e-15)
    ident = ideal_gate(GateSpec(GateKind.UX, 0.0))
    assert np.allclose(ident, np.eye(2), atol=1e-15)


def test_ideal_two_qubit_examples():
    cnot = ideal_two_qubit(gate_from_name("cnot"))
    assert np.allclose(cnot[:2, :2], 1j * SIGMA_X, atol=1e-15)
    assert np.allclose(cnot[2:, 2:], np.eye(2), atol=1e-15)
    assert np.max(np.abs(cnot[:2, 2:])) == 0.0
    assert np.allclose(ideal_two_qubit(GateSpec(GateKind.CONTROLLED_UZ, 0.0)),
                       np.eye(4), atol=1e-15)


def test_gate_kind_dispatch():
    with pytest.raises(ContractViolation):
        ideal_gate(gate_from_name("cs"))
    with pytest.raises(ContractViolation):
        ideal_two_qubit(gate_from_name("s"))
    assert ideal_unitary(gate_from_name("cs")).shape == (4, 4)
    assert ideal_unitary(gate_from_name("s")).shape == (2, 2)


def test_avg_gate_fidelity_examples():
    assert abs(avg_gate_fidelity(np.eye(2), np.eye(2)) - 1.0) < 1e-15
    assert abs(avg_gate_fidelity(np.eye(2), SIGMA_X) - 1.0 / 3.0) < 1e-15
    u = ideal_gate(gate_from_name("s"))
    assert abs(avg_gate_fidelity(u, np.exp(0.7j) * u) - 1.0) < 1e-12


def test_avg_gate_fidelity_invariances(rng):
    for _ in range(50):
        d = int(rng.choice([2, 4]))
        u0, ur = random_unitary(rng, d), random_unitary(rng, d)
        f = avg_gate_fidelity(u0, ur)
        assert -1e-12 <= f <= 1.0 + 1e-12
        w = random_unitary(rng, d)
        f_conj = avg_gate_fidelity(w @ u0 @ w.conj().T, w @ ur @ w.conj().T)
        assert abs(f - f_conj) < 1e-10


def test_avg_gate_fidelity_rejects_bad_input():
    with pytest.raises(ContractViolation):
        avg_gate_fidelity(np.eye(2), np.eye(4))
    with pytest.raises(ContractViolation):
        avg_gate_fidelity(np.eye(2), 1.5 * np.eye(2))


def test_initial_states_contract():
    thetas, states = initial_states(101)
    assert states.shape == (101, 2)
    assert np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0)) < 1e-12
    for bad in (2, 100, 1):
        with pytest.raises(ContractViolation):
            initial_states(bad)


def test_state_avg_fidelity_identity_channel():
    g = GateSpec(GateKind.UZ, 0.0)  # identity target

    def channel(thetas):
        _, psi = initial_states(len(thetas))
        return np.einsum("ni,nj->nij", psi, psi.conj())

    assert abs(state_avg_fidelity(g, channel, 101) - 1.0) < 1e-14


def test_state_avg_fidelity_grid_refinement():
    g = gate_from_name("s")
    u = ideal_gate(g)
    # a slightly depolarized application of the target gate
    lam = 0.97

    def channel(thetas):
        _, psi = initial_states(len(thetas))
        out = psi @ u.T
        rho = np.einsum("ni,nj->nij", out, out.conj())
        return lam * rho + (1 - lam) * np.eye(2) / 2.0

    f1 = state_avg_fidelity(g, channel, 1001)
    f2 = state_avg_fidelity(g, channel, 2001)
    assert abs(f1 - f2) < 1e-6
    assert 0.0 <= f1 <= 1.0


def test_state_avg_fidelity_validates_shape():
    g = gate_from_name("s")
    with pytest.raises(ContractViolation):
        state_avg_fidelity(g, lambda th: np.zeros((3, 2, 2)), 101)
