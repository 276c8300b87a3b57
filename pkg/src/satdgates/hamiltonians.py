"""Hamiltonian builders: bare drive, corrected drive, noise, two-qubit lift.

Every builder returns arrays of shape (..., d, d) when given an array of
times, so propagators can batch-evaluate on a full time grid.  hbar = 1,
angular frequencies in rad/us.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation
from .pulses import DriveParams, Geometry
from .satd import controls, corrected_pulses


@dataclass(frozen=True)
class NoiseParams:
    """Static systematic errors, fractions of the nominal pulses.

    delta_frac shifts the detuning by delta_frac*Omega0; eps_frac scales the
    Rabi amplitude by (1 + eps_frac).
    """

    delta_frac: float = 0.0
    eps_frac: float = 0.0

    def __post_init__(self):
        for name in ("delta_frac", "eps_frac"):
            if not np.isfinite(getattr(self, name)):
                raise ContractViolation(f"{name} must be finite")


@dataclass(frozen=True)
class TwoQubitParams:
    """Hyperfine splitting for the electron-nuclear controlled gate (rad/us)."""

    a_hf: float

    def __post_init__(self):
        if not (np.isfinite(self.a_hf) and self.a_hf > 0.0):
            raise ContractViolation("a_hf must be positive and finite")


def _assemble(delta, omega_r, phi):
    """Rotating-frame two-level Hamiltonian from the pulse triple."""
    delta = np.asarray(delta, dtype=float)
    omega_r = np.asarray(omega_r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    off = omega_r * np.exp(-1j * phi)
    h = np.empty(delta.shape + (2, 2), dtype=complex)
    h[..., 0, 0] = delta
    h[..., 0, 1] = off
    h[..., 1, 0] = np.conj(off)
    h[..., 1, 1] = -delta
    return 0.5 * h


def h0(p: DriveParams, t, noise: NoiseParams | None = None) -> np.ndarray:
    """Bare adiabatic drive Hamiltonian at time(s) t."""
    g = Geometry(p, t)
    delta, omega_r = g.delta, g.omega_r
    if noise is not None:
        delta = delta + noise.delta_frac * p.omega0
        omega_r = omega_r * (1.0 + noise.eps_frac)
    return _assemble(delta, omega_r, g.phi)


def h_satd(p: DriveParams, t, noise: NoiseParams | None = None, *,
           use_gz: bool = True) -> np.ndarray:
    """Corrected drive Hamiltonian built from the modified pulse triple."""
    c = corrected_pulses(p, t, use_gz=use_gz)
    delta, omega_r = c.delta, c.omega_r
    if noise is not None:
        delta = delta + noise.delta_frac * p.omega0
        omega_r = omega_r * (1.0 + noise.eps_frac)
    return _assemble(delta, omega_r, c.phi)


def adiabatic_rotation(p: DriveParams, t) -> np.ndarray:
    """Unitary whose columns are the instantaneous eigenstates of the drive."""
    g = Geometry(p, t)
    ct = np.cos(g.theta / 2.0)
    st = np.sin(g.theta / 2.0)
    e = np.exp(1j * g.phi)
    u = np.empty(np.shape(g.theta) + (2, 2), dtype=complex)
    u[..., 0, 0] = ct
    u[..., 0, 1] = st * np.conj(e)
    u[..., 1, 0] = st * e
    u[..., 1, 1] = -ct
    return u


def h_satd_frame(p: DriveParams, t, *, use_gz: bool = True) -> np.ndarray:
    """Corrected Hamiltonian as H0 plus the rotated control term.

    Equivalent to h_satd; kept as an independent construction for
    cross-checking the corrected pulse algebra.
    """
    c = controls(p, t, use_gz=use_gz)
    u = adiabatic_rotation(p, t)
    ctrl = np.zeros(np.shape(c.g_x) + (2, 2), dtype=complex)
    ctrl[..., 0, 0] = 0.5 * c.g_z
    ctrl[..., 0, 1] = 0.5 * c.g_x
    ctrl[..., 1, 0] = 0.5 * c.g_x
    ctrl[..., 1, 1] = -0.5 * c.g_z
    rotated = u @ ctrl @ np.conj(np.swapaxes(u, -1, -2))
    return h0(p, t) + rotated


def h_tqd(p: DriveParams, t, noise: NoiseParams | None = None) -> np.ndarray:
    """Drive plus the exact counterdiabatic term (transversal correction).

    Comparison mode: removes the adiabatic-frame mixing directly with an
    extra field that is not expressible as a phase/amplitude modification
    of the original pulse.
    """
    g = Geometry(p, t)
    a = -(g.phi_dot * np.sin(g.theta) * np.cos(g.phi) + g.theta_dot * np.sin(g.phi))
    b = g.theta_dot * np.cos(g.phi) - g.phi_dot * np.sin(g.theta) * np.sin(g.phi)
    u = adiabatic_rotation(p, t)
    ctrl = np.zeros(np.shape(a) + (2, 2), dtype=complex)
    off = 0.5 * (a - 1j * b)
    ctrl[..., 0, 1] = off
    ctrl[..., 1, 0] = np.conj(off)
    rotated = u @ ctrl @ np.conj(np.swapaxes(u, -1, -2))
    return h0(p, t, noise) + rotated


def h_tq(p: DriveParams, t, tq: TwoQubitParams,
         noise: NoiseParams | None = None, *, use_gz: bool = True,
         satd: bool = True) -> np.ndarray:
    """Two-qubit lift: the drive addresses the nuclear-spin-down block only.

    Basis order (electron, nucleus): |0 dn>, |1 dn>, |0 up>, |1 up>.  The
    nuclear-spin-up block sees the same field detuned by the hyperfine
    splitting, i.e. its lower-right entry is shifted by 2*a_hf.
    """
    builder = h_satd if satd else h0
    if satd:
        h2 = builder(p, t, noise, use_gz=use_gz)
    else:
        h2 = builder(p, t, noise)
    shape = h2.shape[:-2]
    h4 = np.zeros(shape + (4, 4), dtype=complex)
    h4[..., 0:2, 0:2] = h2
    h4[..., 2:4, 2:4] = h2
    h4[..., 3, 3] += tq.a_hf
    return h4
