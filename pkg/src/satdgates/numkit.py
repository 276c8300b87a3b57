"""Minimal dense complex linear algebra for 2x2 and 4x4 operators.

Everything downstream (Hamiltonian builders, propagators, fidelity metrics)
works on plain ndarrays; this module supplies the structural checks and the
matrix exponential those callers rely on.  Batched inputs of shape
(..., d, d) are accepted everywhere.
"""
from __future__ import annotations

import numpy as np

from .errors import ContractViolation

# Structural (single-shot) and accumulated tolerances; the single knob for
# every contract check in the package.
STRUCT_TOL = 1e-10
ACCUM_TOL = 1e-9

ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _as_operator(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ContractViolation(f"{name} must be square, got shape {a.shape}")
    if a.shape[-1] not in (2, 4):
        raise ContractViolation(f"{name} must be 2x2 or 4x4, got dim {a.shape[-1]}")
    if not np.all(np.isfinite(a.view(float))):
        raise ContractViolation(f"{name} contains non-finite entries")
    return a


def frobenius_distance(a, b) -> float:
    """Frobenius norm of a - b; zero iff the matrices are equal."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ContractViolation(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def hermiticity_defect(h) -> float:
    h = np.asarray(h, dtype=complex)
    return float(np.max(np.linalg.norm(h - np.conj(np.swapaxes(h, -1, -2)), axis=(-2, -1))))


def is_hermitian(h, tol: float = STRUCT_TOL) -> bool:
    h = np.asarray(h, dtype=complex)
    scale = max(1.0, float(np.max(np.linalg.norm(h, axis=(-2, -1)))))
    return hermiticity_defect(h) <= tol * scale


def unitarity_defect(u) -> float:
    u = np.asarray(u, dtype=complex)
    eye = np.eye(u.shape[-1], dtype=complex)
    prod = np.conj(np.swapaxes(u, -1, -2)) @ u
    return float(np.max(np.linalg.norm(prod - eye, axis=(-2, -1))))


def check_unitary(u, tol: float = STRUCT_TOL) -> np.ndarray:
    u = _as_operator(u, "unitary")
    defect = unitarity_defect(u)
    if defect > tol:
        raise ContractViolation(f"matrix is not unitary: ||U^H U - I||_F = {defect:.3e}")
    return u


def check_density(rho, tol: float = STRUCT_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, positive spectrum."""
    rho = _as_operator(rho, "density matrix")
    if hermiticity_defect(rho) > tol:
        raise ContractViolation("density matrix is not Hermitian")
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if np.max(np.abs(tr - 1.0)) > ACCUM_TOL:
        raise ContractViolation(f"density matrix trace {tr} != 1")
    w = np.linalg.eigvalsh(rho)
    if np.min(w) < -1e-8:
        raise ContractViolation(f"density matrix has negative eigenvalue {np.min(w):.3e}")
    return rho


def expm_skew(h, dt: float) -> np.ndarray:
    """exp(-i * H * dt) for Hermitian H (dim 2 closed form, dim 4 eigendecomposition).

    Accepts a batch of Hamiltonians with shape (..., d, d); dt is a scalar.
    """
    h = _as_operator(h, "Hamiltonian")
    if not np.isfinite(dt):
        raise ContractViolation("dt must be finite")
    scale = max(1.0, float(np.max(np.linalg.norm(h, axis=(-2, -1)))))
    if hermiticity_defect(h) > STRUCT_TOL * scale:
        raise ContractViolation("expm_skew requires a Hermitian argument")
    d = h.shape[-1]
    if d == 2:
        return _expm2(h, dt)
    w, v = np.linalg.eigh(h)
    phase = np.exp(-1j * w * dt)
    return np.einsum("...ij,...j,...kj->...ik", v, phase, np.conj(v))


def _expm2(h: np.ndarray, dt: float) -> np.ndarray:
    # H = c*I + v.sigma  ->  exp(-iHdt) = e^{-ic dt}[cos(|v|dt) I - i sin(|v|dt) vhat.sigma]
    c = 0.5 * (h[..., 0, 0] + h[..., 1, 1]).real
    vx = h[..., 1, 0].real
    vy = h[..., 1, 0].imag
    vz = 0.5 * (h[..., 0, 0] - h[..., 1, 1]).real
    r = np.sqrt(vx * vx + vy * vy + vz * vz)
    ang = r * dt
    cos = np.cos(ang)
    # sin(r dt)/r, finite at r = 0
    sinc = dt * np.sinc(ang / np.pi)
    phase = np.exp(-1j * c * dt)
    out = np.empty(h.shape, dtype=complex)
    out[..., 0, 0] = phase * (cos - 1j * sinc * vz)
    out[..., 1, 1] = phase * (cos + 1j * sinc * vz)
    out[..., 0, 1] = phase * (-1j * sinc * (vx - 1j * vy))
    out[..., 1, 0] = phase * (-1j * sinc * (vx + 1j * vy))
    return out
