"""Dressed-state corrections for transitionless driving along the slice path.

The bare adiabatic frame leaves a residual coupling that mixes the
instantaneous eigenstates.  Dressing that frame by a rotation of angle
mu(t) about the drive axis and adding controls (g_x, g_z) removes the
mixing exactly while keeping the corrected pulse within the same
microwave-control form: a modified Rabi amplitude, detuning and phase.

g_z is chosen proportional to theta_dot**2/Omega with the coefficient
sin(phi2)**2/4 (and a sign that flips between the two meridians) so that
the dressed energy E_DS(t) traces the same curve on both halves of the
path.  With the branch exchange at the pole crossings, the accumulated
dynamical phases then cancel and only the geometric phase survives.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ContractViolation, DressedFrameBreakdown
from .pulses import DriveParams, Geometry, Path

#: relative floor under which the dressed gap counts as closed
_GAP_FLOOR = 1e-9


def segment_sign(p: DriveParams, t) -> np.ndarray:
    """+1 on the phi2 window, -1 on the phi1 legs (sign of the g_z control).

    The window is lo-exclusive so that samples exactly at a pole crossing
    take the left-limit value, like the waveforms themselves.
    """
    t = np.asarray(t, dtype=float)
    lo, hi = p.phi2_window()
    return np.where((t > lo) & (t <= hi), 1.0, -1.0)


@dataclass(frozen=True)
class SATDControls:
    """Dressing angle and counterdiabatic controls sampled on a time grid."""

    t: np.ndarray
    mu: np.ndarray
    mu_dot: np.ndarray
    g_x: np.ndarray
    g_z: np.ndarray
    e_ds: np.ndarray


def _gz_terms(p: DriveParams, g: Geometry, use_gz: bool):
    if not use_gz:
        zero = np.zeros_like(g.t)
        return zero, zero
    alpha = np.sin(p.phi2) ** 2 / 4.0
    s = segment_sign(p, g.t)
    gz = s * alpha * g.theta_dot**2 / g.omega
    gz_dot = s * alpha * (2.0 * g.theta_dot * g.theta_ddot / g.omega
                          - g.theta_dot**2 * g.omega_dot / g.omega**2)
    return gz, gz_dot


def controls(p: DriveParams, t, *, use_gz: bool = True) -> SATDControls:
    """Evaluate mu, mu_dot, g_x, g_z and the dressed energy at time(s) t.

    mu is taken as the continuous branch of atan2: the denominator
    Omega + g_z + phi_dot*(1 - cos theta) may pass through zero at strong
    driving, but the dressed gap E_DS stays open as long as numerator and
    denominator do not vanish together.
    """
    g = Geometry(p, t)
    gz, gz_dot = _gz_terms(p, g, use_gz)
    sin_t, cos_t = np.sin(g.theta), np.cos(g.theta)
    sin_p, cos_p = np.sin(g.phi), np.cos(g.phi)

    n = g.theta_dot * cos_p - g.phi_dot * sin_t * sin_p
    d = g.omega + gz + g.phi_dot * (1.0 - cos_t)
    n_dot = (g.theta_ddot * cos_p - g.theta_dot * g.phi_dot * sin_p
             - g.phi_ddot * sin_t * sin_p - g.phi_dot * g.theta_dot * cos_t * sin_p
             - g.phi_dot**2 * sin_t * cos_p)
    d_dot = (g.omega_dot + gz_dot + g.phi_ddot * (1.0 - cos_t)
             + g.phi_dot * g.theta_dot * sin_t)

    e_ds = np.hypot(n, d)
    if np.any(e_ds <= _GAP_FLOOR * max(p.omega0, p.delta0)):
        raise DressedFrameBreakdown(
            "dressed gap closes: mu is undefined where E_DS = 0")
    mu = np.arctan2(n, d)
    mu_dot = (n_dot * d - n * d_dot) / (e_ds * e_ds)
    gx = -mu_dot + g.theta_dot * sin_p + g.phi_dot * sin_t * cos_p
    return SATDControls(t=g.t, mu=mu, mu_dot=mu_dot, g_x=gx, g_z=gz, e_ds=e_ds)


@dataclass(frozen=True)
class CorrectedPulses:
    """Laboratory-frame pulse triple implementing the dressed evolution."""

    t: np.ndarray
    delta: np.ndarray
    omega_r: np.ndarray
    phi: np.ndarray


def corrected_pulses(p: DriveParams, t, *, use_gz: bool = True) -> CorrectedPulses:
    """Corrected (Delta~, Omega_R~, phi~) realizing the transitionless drive."""
    g = Geometry(p, t)
    c = controls(p, t, use_gz=use_gz)
    sin_t, cos_t = np.sin(g.theta), np.cos(g.theta)
    sin_p, cos_p = np.sin(g.phi), np.cos(g.phi)
    total = g.omega + c.g_z
    delta = total * cos_t + c.g_x * sin_t * cos_p
    k = total * sin_t - c.g_x * cos_t * cos_p
    perp = c.g_x * sin_p
    omega_r = np.hypot(k, perp)
    # atan2(0, 0) -> 0 keeps phi~ = phi wherever the corrected amplitude
    # vanishes, which is the continuous limit along the schedule.
    phi = g.phi + np.arctan2(perp, k)
    return CorrectedPulses(t=g.t, delta=delta, omega_r=omega_r, phi=phi)


def scaling_factor(p: DriveParams, t, *, use_gz: bool = True) -> np.ndarray:
    """Pointwise pulse-strength factor P(t) = 1 + alpha*(theta_dot/Omega)**2.

    With the designed g_z the dressed energy obeys E_DS = P*Omega at the
    hard-jump limit sigma = 0 on the phi2 meridian.
    """
    g = Geometry(p, t)
    alpha = np.sin(p.phi2) ** 2 / 4.0 if use_gz else 0.0
    return 1.0 + alpha * (g.theta_dot / g.omega) ** 2


def amplitude_ratio(p: DriveParams, *, use_gz: bool = True,
                    grid: int = 4096) -> float:
    """max_t Omega_R~(t) / Omega_0 — the amplitude overhead of the correction.

    Scanned on a uniform grid, then refined with a bounded scalar
    minimization around the best grid point.
    """
    if grid < 16:
        raise ContractViolation("amplitude_ratio needs a grid of >= 16 points")
    t = np.linspace(0.0, p.total_time, grid + 1)
    vals = corrected_pulses(p, t, use_gz=use_gz).omega_r
    i = int(np.argmax(vals))
    lo = t[max(i - 1, 0)]
    hi = t[min(i + 1, grid)]

    def neg(ti: float) -> float:
        return -float(corrected_pulses(p, ti, use_gz=use_gz).omega_r)

    res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    best = max(float(vals[i]), -float(res.fun))
    return best / p.omega0
