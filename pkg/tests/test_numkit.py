"""Unit tests for the dense linear-algebra primitives."""
import math

import numpy as np
import pytest

from conftest import random_density, random_hermitian
from satdgates.errors import ContractViolation
from satdgates.numkit import (ACCUM_TOL, ID2, SIGMA_X, SIGMA_Z, STRUCT_TOL,
                              check_density, check_unitary, expm_skew,
                              frobenius_distance, hermiticity_defect,
                              is_hermitian, unitarity_defect)


def test_expm_zero_is_identity():
    assert frobenius_distance(expm_skew(np.zeros((2, 2)), 0.7), ID2) < STRUCT_TOL
    assert frobenius_distance(expm_skew(np.zeros((4, 4)), 1.3), np.eye(4)) < STRUCT_TOL


def test_expm_pi_pulse():
    omega0 = 2.0 * math.pi * 3.0
    u = expm_skew(0.5 * omega0 * SIGMA_X, math.pi / omega0)
    assert frobenius_distance(u, -1j * SIGMA_X) < ACCUM_TOL


def test_expm_matches_taylor_series(rng):
    h = random_hermitian(rng, 4)
    dt = 0.37
    a = -1j * dt * h
    term = np.eye(4, dtype=complex)
    ref = np.eye(4, dtype=complex)
    for k in range(1, 41):
        term = term @ a / k
        ref = ref + term
    assert frobenius_distance(expm_skew(h, dt), ref) < 1e-10


def test_expm_rejects_non_hermitian():
    with pytest.raises(ContractViolation):
        expm_skew(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.1)


def test_expm_rejects_non_finite():
    with pytest.raises(ContractViolation):
        expm_skew(np.array([[np.inf, 0.0], [0.0, 0.0]]), 0.1)


def test_frobenius_distance_examples():
    assert frobenius_distance(ID2, ID2) == 0.0
    assert abs(frobenius_distance(SIGMA_X, SIGMA_Z) - 2.0) < STRUCT_TOL
    assert abs(frobenius_distance(ID2, 2.0 * ID2) - math.sqrt(2.0)) < STRUCT_TOL


def test_frobenius_distance_dim_mismatch():
    with pytest.raises(ContractViolation):
        frobenius_distance(ID2, np.eye(4))


def test_expm_semigroup_property(rng):
    for dim in (2, 4):
        for _ in range(50):
            h = random_hermitian(rng, dim)
            dt1, dt2 = rng.uniform(-1.0, 1.0, size=2)
            lhs = expm_skew(h, dt1) @ expm_skew(h, dt2)
            rhs = expm_skew(h, dt1 + dt2)
            assert frobenius_distance(lhs, rhs) < ACCUM_TOL


def test_expm_determinant_identity(rng):
    for dim in (2, 4):
        for _ in range(50):
            h = random_hermitian(rng, dim)
            dt = rng.uniform(-1.0, 1.0)
            det = np.linalg.det(expm_skew(h, dt))
            ref = np.exp(-1j * np.trace(h) * dt)
            assert abs(det - ref) < ACCUM_TOL


def test_expm_unitarity_random(rng):
    for dim in (2, 4):
        for _ in range(100):
            u = expm_skew(random_hermitian(rng, dim), rng.uniform(-2.0, 2.0))
            assert unitarity_defect(u) < STRUCT_TOL


def test_hermiticity_helpers(rng):
    h = random_hermitian(rng, 2)
    assert hermiticity_defect(h) < 1e-15
    assert is_hermitian(h)
    assert not is_hermitian(h + np.array([[0.0, 1e-6], [0.0, 0.0]]))


def test_check_unitary_rejects_scaled_identity():
    with pytest.raises(ContractViolation):
        check_unitary(1.1 * ID2)


def test_check_density_validates(rng):
    rho = random_density(rng, 2)
    check_density(rho)
    with pytest.raises(ContractViolation):
        check_density(2.0 * rho)  # trace 2
    with pytest.raises(ContractViolation):
        check_density(np.array([[1.5, 0.0], [0.0, -0.5]]))  # negative eigenvalue
