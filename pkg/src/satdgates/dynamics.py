"""Time evolution: unitary propagation, the analytic dressed-frame evolution
operator, the geometric/dynamical phase split, and Lindblad open-system
propagation.

The numerical propagator and the analytic dressed-frame operator are
independent routes to the same gate; their agreement is the central
cross-check of the whole construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import ContractViolation, ConvergenceFailure
from .numkit import ACCUM_TOL, check_density, expm_skew, frobenius_distance
from .pulses import DriveParams
from .satd import controls

_MAX_HALVINGS = 20


@dataclass(frozen=True)
class PropagatorResult:
    """Final unitary with the step count and Richardson error estimate."""

    u_final: np.ndarray
    step_count: int
    est_error: float


def _chain_product(mats: np.ndarray) -> np.ndarray:
    """Ordered product mats[-1] @ ... @ mats[0] by pairwise reduction."""
    while mats.shape[0] > 1:
        n = mats.shape[0]
        even = mats[: n - n % 2]
        paired = even[1::2] @ even[0::2]
        if n % 2:
            paired = np.concatenate([paired, mats[-1:]], axis=0)
        mats = paired
    return mats[0]


_CHUNK = 1 << 16


def _midpoint_unitary(h_fn: Callable, t0: float, t1: float, n: int) -> np.ndarray:
    h = (t1 - t0) / n
    u = None
    # Chunk the step grid so the batched exponentials stay memory-bounded
    # when small tolerances drive n into the millions.
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        mids = t0 + (np.arange(start, stop) + 0.5) * h
        hams = np.asarray(h_fn(mids))
        if hams.shape[0] != stop - start:
            raise ContractViolation("Hamiltonian callable must vectorize over t")
        block = _chain_product(expm_skew(hams, h))
        u = block if u is None else block @ u
    return u


def propagate_unitary(h_fn: Callable, t0: float, t1: float, *,
                      tol: float = 1e-10, n0: int = 64) -> PropagatorResult:
    """Time-ordered propagator of H(t) on [t0, t1] by midpoint exponentials.

    h_fn must accept an array of times and return Hermitian matrices of
    shape (n, d, d).  The step is halved until successive propagators agree
    within tol in Frobenius norm; n stays a multiple of 4 so that the
    quarter-boundary discontinuities of the drive never fall inside a step.
    """
    if not (tol > 0.0) or not (t1 > t0):
        raise ContractViolation("need tol > 0 and t1 > t0")
    n = max(4, ((n0 + 3) // 4) * 4)
    u_prev = _midpoint_unitary(h_fn, t0, t1, n)
    for _ in range(_MAX_HALVINGS):
        n *= 2
        u = _midpoint_unitary(h_fn, t0, t1, n)
        err = frobenius_distance(u, u_prev)
        if err < tol:
            return PropagatorResult(u_final=u, step_count=n, est_error=err)
        u_prev = u
    raise ConvergenceFailure(
        f"propagator did not reach tol={tol} after {_MAX_HALVINGS} halvings"
        f" (last n={n}, residual={err:.3e})")


@dataclass(frozen=True)
class PhaseDecomposition:
    """Geometric/dynamical split of the phase accumulated over one gate.

    The energy integrals carry the factor 1/2 from the dressed-frame
    Hamiltonian E_DS*S_z, so gamma_t feeds the analytic evolution operator
    without further factors.
    """

    gamma_g: float
    gamma_d: float
    i_phi1: float
    i_phi2: float

    @property
    def gamma_t(self) -> float:
        return self.gamma_g + self.gamma_d


def phase_decomposition(p: DriveParams, *, use_gz: bool = True,
                        quad_tol: float = 1e-10) -> PhaseDecomposition:
    """Split the total phase into geometric and dynamical parts.

    The dynamical part is the difference of the dressed-energy integrals
    over the two meridians; the opposite traversal directions of the outer
    and middle path segments give the minus sign.  The orientation
    (gamma_d = i_phi2 - i_phi1) is pinned by requiring that the analytic
    evolution operator built from gamma_t reproduce the numerical
    propagator when the cancellation control g_z is switched off.
    """

    def integrand(t: float) -> float:
        return float(controls(p, t, use_gz=use_gz).e_ds)

    halves = [0.0, p.tau, 2.0 * p.tau, 3.0 * p.tau, 4.0 * p.tau]
    lo, hi = p.phi2_window()
    i1 = i2 = 0.0
    for a, b in zip(halves[:-1], halves[1:]):
        val, _ = quad(integrand, a, b, epsabs=quad_tol, limit=200)
        mid = 0.5 * (a + b)
        if lo <= mid <= hi:
            i2 += 0.5 * val
        else:
            i1 += 0.5 * val
    gamma_g = math.pi - (p.phi2 - p.phi1)
    return PhaseDecomposition(gamma_g=gamma_g, gamma_d=i2 - i1,
                              i_phi1=i1, i_phi2=i2)


def ds_evolution_operator(p: DriveParams, *, use_gz: bool = True) -> np.ndarray:
    """Analytic end-to-end gate from the phase decomposition.

    Valid because the dressing closes at both ends (mu(0) = mu(T) = 0) and
    the path returns to its starting point, so the whole evolution is a
    rotation by the total phase about the axis set by chi and phi1.
    """
    ph = phase_decomposition(p, use_gz=use_gz)
    g = ph.gamma_t
    chi, phi1 = p.chi, p.phi1
    c, s = math.cos(g), math.sin(g)
    return np.array([
        [c + 1j * math.cos(chi) * s, 1j * np.exp(-1j * phi1) * math.sin(chi) * s],
        [1j * np.exp(1j * phi1) * math.sin(chi) * s, c - 1j * math.cos(chi) * s],
    ], dtype=complex)


def _kron_batch(a: np.ndarray, eye: np.ndarray) -> np.ndarray:
    d = eye.shape[0]
    return np.einsum("nij,kl->nikjl", a, eye).reshape(-1, d * d, d * d)


def _dissipator(jumps, d: int) -> np.ndarray:
    eye = np.eye(d)
    diss = np.zeros((d * d, d * d), dtype=complex)
    for rate, b in jumps:
        if rate < 0.0:
            raise ContractViolation("decoherence rates must be nonnegative")
        bb = b.conj().T @ b
        diss += rate * (2.0 * np.kron(b, b.conj())
                        - np.kron(bb, eye) - np.kron(eye, bb.T))
    return diss


def _superpropagator_fixed(h_fn: Callable, segments, n_per_seg: int,
                           jumps) -> np.ndarray:
    """RK4 integration of dS/dt = L(t) S, piecewise over smooth segments.

    The drive is discontinuous at interior segment boundaries and the time
    samplers return left limits there, so each segment's starting sample is
    nudged infinitesimally inward to pick up the right-limit value.
    """
    sup = None
    diss = None
    for a, b in segments:
        h = (b - a) / n_per_seg
        grid = a + 0.5 * h * np.arange(2 * n_per_seg + 1)
        if a > segments[0][0]:
            grid[0] = a + 1e-9 * (b - a)
        hams = np.asarray(h_fn(grid))
        d = hams.shape[-1]
        eye = np.eye(d)
        comm = (-1j) * (_kron_batch(hams, eye)
                        - np.einsum("kl,nij->nkilj", eye,
                                    np.transpose(hams, (0, 2, 1))
                                    ).reshape(-1, d * d, d * d))
        if sup is None:
            sup = np.eye(d * d, dtype=complex)
            diss = _dissipator(jumps, d)
        for k in range(n_per_seg):
            l0 = comm[2 * k] + diss
            lm = comm[2 * k + 1] + diss
            l1 = comm[2 * k + 2] + diss
            k1 = l0 @ sup
            k2 = lm @ (sup + 0.5 * h * k1)
            k3 = lm @ (sup + 0.5 * h * k2)
            k4 = l1 @ (sup + h * k3)
            sup = sup + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return sup


def lindblad_superpropagator(h_fn: Callable, t0: float, t1: float, *,
                             kappa1: float = 0.0, kappa2: float = 0.0,
                             tol: float = 1e-9, n0: int = 16,
                             breakpoints=()) -> np.ndarray:
    """Map vec(rho(t0)) -> vec(rho(t1)) for the two-channel master equation.

    The channels are amplitude decay through |0><1| at rate kappa1 and
    dephasing through |1><1| at rate kappa2, each entering the dissipator
    with the factor-2 convention 2 b rho b+ - {b+b, rho}.  breakpoints are
    interior times where the drive is discontinuous; aligning steps with
    them keeps the integrator at fourth order.  The returned matrix is
    reusable across many initial states.
    """
    probe = np.asarray(h_fn(np.array([t0])))
    d = probe.shape[-1]
    b_minus = np.zeros((d, d), dtype=complex)
    b_minus[0, 1] = 1.0
    b_z = np.zeros((d, d), dtype=complex)
    b_z[1, 1] = 1.0
    jumps = ((kappa1, b_minus), (kappa2, b_z))
    edges = [t0] + sorted(float(b) for b in breakpoints if t0 < b < t1) + [t1]
    segments = list(zip(edges[:-1], edges[1:]))
    n = max(4, n0)
    prev = _superpropagator_fixed(h_fn, segments, n, jumps)
    for _ in range(_MAX_HALVINGS):
        n *= 2
        cur = _superpropagator_fixed(h_fn, segments, n, jumps)
        err = float(np.linalg.norm(cur - prev))
        if err < tol:
            return cur
        prev = cur
    raise ConvergenceFailure(
        f"Lindblad integrator did not reach tol={tol} (n={n}, residual={err:.3e})")


def apply_superpropagator(sup: np.ndarray, rho0: np.ndarray) -> np.ndarray:
    """Evolve one density matrix through a precomputed superpropagator."""
    d = rho0.shape[-1]
    rho = (sup @ rho0.reshape(d * d)).reshape(d, d)
    # renormalize away the integrator's trace drift (bounded by the
    # convergence tolerance) so downstream density checks see trace 1
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-6:
        raise ConvergenceFailure(f"trace drift {abs(tr - 1.0):.3e} exceeds 1e-6")
    return rho / tr


def propagate_lindblad(h_fn: Callable, rho0: np.ndarray, t0: float, t1: float,
                       *, kappa1: float = 0.0, kappa2: float = 0.0,
                       tol: float = 1e-9, breakpoints=()) -> np.ndarray:
    """Integrate the master equation from rho0 over [t0, t1]."""
    check_density(rho0, tol=ACCUM_TOL)
    sup = lindblad_superpropagator(h_fn, t0, t1, kappa1=kappa1,
                                   kappa2=kappa2, tol=tol,
                                   breakpoints=breakpoints)
    rho = apply_superpropagator(sup, rho0)
    check_density(rho, tol=1e-8)
    return rho
