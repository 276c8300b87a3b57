"""Orange-slice drive schedules and the adiabatic quantities derived from them.

The drive is specified by piecewise-cosine detuning Delta(t) and Rabi
amplitude Omega_R(t) over four quarters of duration tau, together with a
microwave phase phi that is constant on each meridian of the path and jumps
at the pole crossings.  The detuning changes sign instantaneously at each
pole crossing (where Omega_R = 0): the field direction flips through the
pole while the state stays put, exchanging the adiabatic branches.  This
branch exchange is what makes the energy phases of the outer and middle
path segments enter the total phase with opposite signs.

All frequencies are angular (rad/us); times are in us.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ContractViolation, SingularGeometry

TWO_PI = 2.0 * math.pi
#: default carrier Rabi amplitude, Omega_0/2pi = 3 MHz
DEFAULT_OMEGA0 = TWO_PI * 3.0


class Path(Enum):
    """Which meridian schedule the drive follows (z-rotation vs x-rotation path)."""

    Z = "z"
    X = "x"


# Per-segment (a, b) coefficients: Delta = Delta0 * (a*cos(pi s/tau) + b),
# Omega_R = Omega0 * (a*cos(pi s/tau) + b), s = t - k*tau.
_DELTA_COEF = {
    Path.Z: ((1, 1), (1, -1), (1, 1), (1, -1)),
    Path.X: ((1, -1), (1, 1), (1, -1), (1, 1)),
}
_OMEGA_COEF = {
    Path.Z: ((-1, 1), (1, 1), (-1, 1), (1, 1)),
    Path.X: ((1, 1), (-1, 1), (1, 1), (-1, 1)),
}


@dataclass(frozen=True)
class DriveParams:
    """All constants defining one gate run.

    omega0, delta0 : angular frequencies (rad/us)
    tau            : quarter-path duration (us); total evolution time is 4*tau
    phi1, phi2     : meridian azimuths (rad); phi1 = 0 for the gate set
    path           : Path.Z (chi = 0) or Path.X (chi = pi/2)
    sigma          : phase-smoothing width (us); 0 means a hard jump
    """

    omega0: float
    delta0: float
    tau: float
    phi1: float = 0.0
    phi2: float = math.pi / 2
    path: Path = Path.Z
    sigma: float = 0.0

    def __post_init__(self):
        if not (self.omega0 > 0.0):
            raise ContractViolation("omega0 must be positive")
        if not (self.tau > 0.0):
            raise ContractViolation("tau must be positive")
        if self.delta0 < 0.0:
            raise ContractViolation("delta0 must be nonnegative")
        if not (0.0 <= self.sigma < self.tau / 2.0):
            raise ContractViolation("sigma must satisfy 0 <= sigma < tau/2")
        for name in ("omega0", "delta0", "tau", "phi1", "phi2", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ContractViolation(f"{name} must be finite")

    @classmethod
    def from_dimensionless(cls, eta: float, x: float, *, omega0: float = DEFAULT_OMEGA0,
                           phi1: float = 0.0, phi2: float = math.pi / 2,
                           path: Path = Path.Z, sigma: float = 0.0) -> "DriveParams":
        """Build from eta = Delta0/Omega0 and x = tau*Omega0."""
        return cls(omega0=omega0, delta0=eta * omega0, tau=x / omega0,
                   phi1=phi1, phi2=phi2, path=path, sigma=sigma)

    @property
    def eta(self) -> float:
        return self.delta0 / self.omega0

    @property
    def x(self) -> float:
        return self.tau * self.omega0

    @property
    def chi(self) -> float:
        """Initial polar angle theta(0): 0 on the Z path, pi/2 on the X path."""
        return 0.0 if self.path is Path.Z else math.pi / 2

    @property
    def total_time(self) -> float:
        return 4.0 * self.tau

    @property
    def phase_jump_times(self) -> tuple[float, ...]:
        """Pole-crossing times where phi jumps (and Delta flips sign)."""
        if self.path is Path.Z:
            return (2.0 * self.tau,)
        return (self.tau, 3.0 * self.tau)

    def phi2_window(self) -> tuple[float, float]:
        """Interval on which the drive phase sits at phi2."""
        if self.path is Path.Z:
            return (2.0 * self.tau, 4.0 * self.tau)
        return (self.tau, 3.0 * self.tau)


@dataclass(frozen=True)
class PulseSample:
    """Instantaneous drive values and the adiabatic-frame polar angle."""

    t: np.ndarray
    delta: np.ndarray
    omega_r: np.ndarray
    phi: np.ndarray
    phi_dot: np.ndarray
    theta: np.ndarray
    theta_dot: np.ndarray
    omega: np.ndarray


def _check_domain(p: DriveParams, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < -1e-12) or np.any(t > p.total_time * (1 + 1e-12)):
        raise ContractViolation(f"t outside [0, {p.total_time}]")
    return t


def _segments(p: DriveParams, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Boundary times belong to the earlier quarter so that the documented
    # samples at the pole crossings take the left limit.
    k = np.clip(np.ceil(t / p.tau).astype(int) - 1, 0, 3)
    s = t - k * p.tau
    return k, s


def _piecewise(coef, amp: float, tau: float, k: np.ndarray, s: np.ndarray):
    a = np.choose(k, [c[0] for c in coef]).astype(float)
    b = np.choose(k, [c[1] for c in coef]).astype(float)
    w = math.pi / tau
    cos = np.cos(w * s)
    sin = np.sin(w * s)
    f = amp * (a * cos + b)
    df = -amp * a * w * sin
    d2f = -amp * a * w * w * cos
    return f, df, d2f


def waveforms(p: DriveParams, t):
    """(Delta, dDelta, d2Delta, Omega_R, dOmega_R, d2Omega_R) at time(s) t."""
    t = _check_domain(p, t)
    k, s = _segments(p, t)
    dl, ddl, d2dl = _piecewise(_DELTA_COEF[p.path], p.delta0, p.tau, k, s)
    om, dom, d2om = _piecewise(_OMEGA_COEF[p.path], p.omega0, p.tau, k, s)
    return dl, ddl, d2dl, om, dom, d2om


def delta_of_t(p: DriveParams, t):
    """Detuning Delta(t) (rad/us)."""
    return waveforms(p, t)[0]


def omega_r_of_t(p: DriveParams, t):
    """Rabi amplitude Omega_R(t) >= 0 (rad/us)."""
    return waveforms(p, t)[3]


def phase_terms(p: DriveParams, t):
    """(phi, phi_dot, phi_ddot) at time(s) t, smoothed when sigma > 0."""
    t = _check_domain(p, t)
    dphi = p.phi2 - p.phi1
    jumps = p.phase_jump_times
    steps = [dphi] if p.path is Path.Z else [dphi, -dphi]
    if p.sigma == 0.0:
        # lo-exclusive so a sample exactly at the jump takes the left
        # limit, matching the segment convention of the waveforms
        lo, hi = p.phi2_window()
        inside = (t > lo) & (t <= hi)
        phi = np.where(inside, p.phi2, p.phi1)
        zero = np.zeros_like(phi)
        return phi, zero, zero
    phi = np.full_like(t, p.phi1, dtype=float)
    dphi_dt = np.zeros_like(phi)
    d2phi_dt2 = np.zeros_like(phi)
    for tj, step in zip(jumps, steps):
        u = (t - tj) / p.sigma
        th = np.tanh(u)
        # sech^2 via exp(-2|u|) to avoid cosh overflow for large |u|
        e = np.exp(-2.0 * np.abs(u))
        sech2 = 4.0 * e / (1.0 + e) ** 2
        phi = phi + 0.5 * step * (1.0 + th)
        dphi_dt = dphi_dt + 0.5 * step * sech2 / p.sigma
        d2phi_dt2 = d2phi_dt2 - step * th * sech2 / p.sigma**2
    return phi, dphi_dt, d2phi_dt2


def phi_of_t(p: DriveParams, t):
    """Microwave phase and its rate, (phi(t), phi_dot(t))."""
    phi, dphi, _ = phase_terms(p, t)
    return phi, dphi


class Geometry:
    """Adiabatic-frame quantities with the derivatives the corrections need."""

    __slots__ = ("t", "delta", "omega_r", "phi", "phi_dot", "phi_ddot",
                 "theta", "theta_dot", "theta_ddot", "omega", "omega_dot")

    def __init__(self, p: DriveParams, t):
        t = _check_domain(p, t)
        dl, ddl, d2dl, om, dom, d2om = waveforms(p, t)
        phi, dphi, d2phi = phase_terms(p, t)
        omega2 = dl * dl + om * om
        omega = np.sqrt(omega2)
        if np.any(omega <= 0.0):
            raise SingularGeometry(
                "Omega vanishes on the schedule; delta0 > 0 is required")
        theta = np.arctan2(om, dl)
        num = dom * dl - ddl * om
        theta_dot = num / omega2
        omega_dot = (dl * ddl + om * dom) / omega
        dnum = d2om * dl - d2dl * om
        theta_ddot = dnum / omega2 - 2.0 * theta_dot * omega_dot / omega
        self.t = t
        self.delta = dl
        self.omega_r = om
        self.phi = phi
        self.phi_dot = dphi
        self.phi_ddot = d2phi
        self.theta = theta
        self.theta_dot = theta_dot
        self.theta_ddot = theta_ddot
        self.omega = omega
        self.omega_dot = omega_dot


def adiabatic_sample(p: DriveParams, t) -> PulseSample:
    """Sample the drive and its adiabatic angles at time(s) t."""
    g = Geometry(p, t)
    return PulseSample(t=g.t, delta=g.delta, omega_r=g.omega_r, phi=g.phi,
                       phi_dot=g.phi_dot, theta=g.theta, theta_dot=g.theta_dot,
                       omega=g.omega)
