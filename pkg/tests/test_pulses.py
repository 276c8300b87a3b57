"""Unit tests for the slice-path drive schedules and adiabatic geometry."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_drive
from satdgates.errors import ContractViolation, SingularGeometry
from satdgates.pulses import (DriveParams, Geometry, Path, adiabatic_sample,
                              delta_of_t, omega_r_of_t, phase_terms, phi_of_t,
                              waveforms)


# ------------------------------------------------------------- construction


def test_dimensionless_roundtrip():
    p = make_drive(eta=1.5, x=3.0)
    assert abs(p.eta - 1.5) < 1e-15
    assert abs(p.x - 3.0) < 1e-15
    assert abs(p.total_time - 4.0 * p.tau) < 1e-15


def test_path_fixes_chi():
    assert make_drive(path=Path.Z).chi == 0.0
    assert make_drive(path=Path.X).chi == math.pi / 2


@pytest.mark.parametrize("kw", [
    {"omega0": 0.0}, {"omega0": -1.0}, {"tau": 0.0}, {"delta0": -0.1},
    {"sigma": -1e-3}, {"sigma": 0.5},  # sigma must stay below tau/2
    {"omega0": math.nan},
])
def test_invalid_params_rejected(kw):
    base = dict(omega0=2.0, delta0=2.0, tau=1.0, phi2=math.pi / 2, path=Path.Z)
    base.update(kw)
    with pytest.raises(ContractViolation):
        DriveParams(**base)


def test_domain_checked():
    p = make_drive()
    with pytest.raises(ContractViolation):
        delta_of_t(p, -0.1)
    with pytest.raises(ContractViolation):
        delta_of_t(p, p.total_time + 1e-6)


# ------------------------------------------------------------- waveforms


def test_z_path_endpoint_values():
    p = make_drive(path=Path.Z)
    assert abs(delta_of_t(p, 0.0) - 2.0 * p.delta0) < 1e-12
    assert abs(delta_of_t(p, p.tau)) < 1e-12
    assert abs(omega_r_of_t(p, 0.0)) < 1e-12
    assert abs(omega_r_of_t(p, p.tau) - 2.0 * p.omega0) < 1e-12


def test_x_path_endpoint_values():
    p = make_drive(path=Path.X)
    assert abs(delta_of_t(p, 0.0)) < 1e-12
    assert abs(omega_r_of_t(p, 0.0) - 2.0 * p.omega0) < 1e-12


def test_rabi_amplitude_continuous_detuning_flips_at_poles():
    # Omega_R and |Delta| are continuous everywhere; Delta itself reverses
    # sign at the pole crossings, which realizes the adiabatic-branch
    # exchange (theta restarts at 0 after reaching pi).
    eps = 1e-9
    for path in (Path.Z, Path.X):
        p = make_drive(path=path)
        for k in (1, 2, 3):
            tb = k * p.tau
            om_l, om_r = omega_r_of_t(p, tb - eps), omega_r_of_t(p, tb + eps)
            dl_l, dl_r = delta_of_t(p, tb - eps), delta_of_t(p, tb + eps)
            assert abs(om_l - om_r) < 1e-6 * p.omega0
            assert abs(abs(dl_l) - abs(dl_r)) < 1e-6 * p.omega0
            if tb in p.phase_jump_times:
                assert dl_l < 0.0 < dl_r
            else:
                assert abs(dl_l - dl_r) < 1e-6 * p.omega0


def test_quarter_boundaries_are_stationary():
    for path in (Path.Z, Path.X):
        p = make_drive(path=path)
        ts = np.array([0.0, p.tau, 2.0 * p.tau, 3.0 * p.tau, 4.0 * p.tau])
        _, ddl, _, om, dom, _ = waveforms(p, ts)
        g = Geometry(p, ts)
        assert np.all(np.abs(g.theta_dot) < 1e-12)
        assert np.all(np.abs(ddl) < 1e-9)
        assert np.all(np.abs(om * dom) < 1e-9)


def test_theta_monotone_between_phase_jumps():
    for path in (Path.Z, Path.X):
        p = make_drive(path=path)
        edges = (0.0, *p.phase_jump_times, p.total_time)
        for lo, hi in zip(edges[:-1], edges[1:]):
            ts = np.linspace(lo + 1e-9, hi, 2500)
            theta = adiabatic_sample(p, ts).theta
            assert np.all(np.diff(theta) >= -1e-12)
            # legs ending at a phase jump reach the south pole; the final
            # leg closes the slice at the mirror of the starting angle
            end = math.pi if hi in p.phase_jump_times else math.pi - p.chi
            assert abs(theta[-1] - end) < 1e-9


# ------------------------------------------------------------- phase


def test_phase_piecewise_constant_hard_jump():
    p = make_drive(path=Path.Z)
    phi, dphi = phi_of_t(p, p.tau)
    assert phi == p.phi1 and dphi == 0.0
    phi_mid, _ = phi_of_t(p, 3.0 * p.tau)
    assert phi_mid == p.phi2
    # samples exactly at a jump take the left-limit value
    phi_jump, _ = phi_of_t(p, 2.0 * p.tau)
    assert phi_jump == p.phi1


def test_phase_smoothing_midpoint():
    sigma = 0.01
    p = make_drive(path=Path.Z, sigma=sigma)
    phi, dphi = phi_of_t(p, 2.0 * p.tau)
    assert abs(phi - 0.5 * (p.phi1 + p.phi2)) < 1e-12
    assert abs(dphi - (p.phi2 - p.phi1) / (2.0 * sigma)) < 1e-9


def test_phase_smoothing_shape():
    p = make_drive(path=Path.Z, sigma=0.01)
    ts = np.linspace(0.0, p.total_time, 4001)
    phi, _, _ = phase_terms(p, ts)
    assert np.all(np.diff(phi) >= -1e-15)  # monotone ramp phi1 -> phi2
    assert abs(phi[0] - p.phi1) < 1e-8
    assert abs(phi[-1] - p.phi2) < 1e-8


def test_phase_converges_to_hard_jump():
    p0 = make_drive(path=Path.X)
    ts = np.linspace(0.0, p0.total_time, 801)
    away = np.ones_like(ts, dtype=bool)
    for tj in p0.phase_jump_times:
        away &= np.abs(ts - tj) > 0.05 * p0.tau
    phi0, _ = phi_of_t(p0, ts)
    for sigma in (1e-3, 1e-4, 1e-5):
        phi, _ = phi_of_t(make_drive(path=Path.X, sigma=sigma), ts)
        gap = np.max(np.abs(phi[away] - phi0[away]))
        assert gap < 50.0 * sigma / p0.tau


# ------------------------------------------------------------- geometry


def test_adiabatic_sample_z_endpoints():
    p = make_drive(path=Path.Z)
    s0 = adiabatic_sample(p, 0.0)
    assert abs(s0.theta) < 1e-12 and abs(s0.theta_dot) < 1e-12
    assert abs(s0.omega - 2.0 * p.delta0) < 1e-12
    s2 = adiabatic_sample(p, 2.0 * p.tau)  # left limit at the pole crossing
    assert abs(s2.theta - math.pi) < 1e-12 and abs(s2.theta_dot) < 1e-12
    assert abs(s2.omega - 2.0 * p.delta0) < 1e-12


def test_adiabatic_sample_x_start():
    p = make_drive(path=Path.X)
    s = adiabatic_sample(p, 0.0)
    assert abs(s.theta - math.pi / 2) < 1e-12
    assert abs(s.omega - 2.0 * p.omega0) < 1e-12


def test_singular_geometry_without_detuning():
    p = DriveParams(omega0=2.0, delta0=0.0, tau=1.0, phi2=math.pi / 2,
                    path=Path.Z)
    with pytest.raises(SingularGeometry):
        adiabatic_sample(p, 0.0)  # Omega_R(0) = Delta(0) = 0


def test_theta_dot_matches_finite_difference():
    p = make_drive(eta=1.3, x=2.7, path=Path.X)
    ts = np.linspace(0.05 * p.tau, 0.95 * p.tau, 200)
    h = 1e-7
    g = Geometry(p, ts)
    fd = (Geometry(p, ts + h).theta - Geometry(p, ts - h).theta) / (2.0 * h)
    assert np.max(np.abs(g.theta_dot - fd)) < 1e-5 * np.max(np.abs(g.theta_dot))


@settings(max_examples=150, deadline=None)
@given(eta=st.floats(0.3, 5.0), x=st.floats(0.5, 20.0), u=st.floats(0.0, 1.0),
       path=st.sampled_from([Path.Z, Path.X]))
def test_sample_invariants(eta, x, u, path):
    p = make_drive(eta=eta, x=x, path=path)
    s = adiabatic_sample(p, u * p.total_time)
    assert abs(s.omega**2 - (s.delta**2 + s.omega_r**2)) <= 1e-10 * s.omega**2
    assert s.omega_r >= 0.0
    assert 0.0 <= s.theta <= math.pi
    assert abs(s.theta - math.atan2(s.omega_r, s.delta)) < 1e-12
