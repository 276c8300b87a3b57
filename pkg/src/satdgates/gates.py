"""Ideal target gates and the two fidelity metrics used to benchmark runs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import ContractViolation
from .numkit import check_density, unitarity_defect


class GateKind(Enum):
    UZ = "uz"
    UX = "ux"
    CONTROLLED_UZ = "cuz"
    CONTROLLED_UX = "cux"

    @property
    def is_controlled(self) -> bool:
        return self in (GateKind.CONTROLLED_UZ, GateKind.CONTROLLED_UX)

    @property
    def chi(self) -> float:
        """Initial polar angle of the path realizing this gate family."""
        if self in (GateKind.UZ, GateKind.CONTROLLED_UZ):
            return 0.0
        return math.pi / 2


@dataclass(frozen=True)
class GateSpec:
    """A target geometric gate: rotation family plus geometric phase."""

    kind: GateKind
    gamma_g: float

    def __post_init__(self):
        if not math.isfinite(self.gamma_g):
            raise ContractViolation("gamma_g must be finite")

    @property
    def chi(self) -> float:
        return self.kind.chi

    @property
    def phi2(self) -> float:
        """Second-meridian azimuth realizing gamma_g with phi1 = 0."""
        return math.pi - self.gamma_g


_NAMED = {
    "s": (GateKind.UZ, math.pi / 2),
    "not": (GateKind.UX, math.pi / 2),
    "cs": (GateKind.CONTROLLED_UZ, math.pi / 2),
    "cnot": (GateKind.CONTROLLED_UX, math.pi / 2),
}


def gate_from_name(name: str, *, gamma_g: float | None = None,
                   kind: GateKind | None = None) -> GateSpec:
    """Resolve a CLI gate name; 'custom' needs explicit kind and gamma_g."""
    key = name.lower()
    if key in _NAMED:
        k, g = _NAMED[key]
        return GateSpec(kind=k, gamma_g=g if gamma_g is None else gamma_g)
    if key == "custom":
        if kind is None or gamma_g is None:
            raise ContractViolation("custom gate requires kind and gamma_g")
        return GateSpec(kind=kind, gamma_g=gamma_g)
    raise ContractViolation(
        f"unknown gate {name!r}; expected one of s, not, cs, cnot, custom")


def _rotation(chi: float, gamma: float) -> np.ndarray:
    c, s = math.cos(gamma), math.sin(gamma)
    cc, sc = math.cos(chi), math.sin(chi)
    return np.array([[c + 1j * cc * s, 1j * sc * s],
                     [1j * sc * s, c - 1j * cc * s]], dtype=complex)


def ideal_gate(g: GateSpec) -> np.ndarray:
    """2x2 geometric gate exp(i*gamma_g*(cos(chi) sz + sin(chi) sx))."""
    if g.kind.is_controlled:
        raise ContractViolation("controlled kinds use ideal_two_qubit")
    return _rotation(g.chi, g.gamma_g)


def ideal_two_qubit(g: GateSpec) -> np.ndarray:
    """Controlled gate: the single-qubit rotation on the nuclear-spin-down
    block, identity on the spin-up block (basis |0 dn>,|1 dn>,|0 up>,|1 up>)."""
    if not g.kind.is_controlled:
        raise ContractViolation("single-qubit kinds use ideal_gate")
    u = np.eye(4, dtype=complex)
    u[0:2, 0:2] = _rotation(g.chi, g.gamma_g)
    return u


def ideal_unitary(g: GateSpec) -> np.ndarray:
    """Dispatch to the 2x2 or 4x4 target by gate kind."""
    return ideal_two_qubit(g) if g.kind.is_controlled else ideal_gate(g)


def avg_gate_fidelity(u0: np.ndarray, ur: np.ndarray, *,
                      unitary_tol: float = 1e-6) -> float:
    """Average fidelity (|tr M|^2 + tr(M M+)) / (d(d+1)), M = u0+ ur.

    Global-phase insensitive; requires a unitary realized gate (open-system
    channels are scored with state_avg_fidelity instead).
    """
    u0 = np.asarray(u0, dtype=complex)
    ur = np.asarray(ur, dtype=complex)
    if u0.shape != ur.shape or u0.ndim != 2 or u0.shape[0] != u0.shape[1]:
        raise ContractViolation("fidelity needs two square matrices of equal dim")
    for name, u in (("u0", u0), ("ur", ur)):
        if unitarity_defect(u) > unitary_tol:
            raise ContractViolation(f"{name} is not unitary within {unitary_tol}")
    d = u0.shape[0]
    m = u0.conj().T @ ur
    return float((abs(np.trace(m)) ** 2 + np.trace(m @ m.conj().T).real)
                 / (d * (d + 1)))


def initial_states(grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Real-amplitude probe family cos(theta)|0> + sin(theta)|1> on [0, 2pi].

    Returns (thetas, states) with states of shape (grid_size, 2).  This is
    the printed benchmarking family, not a Haar average.
    """
    if grid_size < 3 or grid_size % 2 == 0:
        raise ContractViolation("grid_size must be odd and >= 3")
    thetas = np.linspace(0.0, 2.0 * math.pi, grid_size)
    states = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1).astype(complex)
    return thetas, states


def state_avg_fidelity(g: GateSpec, rho_of_theta: Callable[[np.ndarray], np.ndarray],
                       grid_size: int = 1001, *, validate: bool = True) -> float:
    """Average overlap of the evolved states with the ideal targets.

    rho_of_theta maps the (grid_size,) array of state angles to evolved
    density matrices of shape (grid_size, 2, 2).  The quadrature is the
    trapezoid rule on the periodic theta grid.
    """
    thetas, psi0 = initial_states(grid_size)
    rhos = np.asarray(rho_of_theta(thetas))
    if rhos.shape != (grid_size, 2, 2):
        raise ContractViolation("rho_of_theta must return (grid_size, 2, 2)")
    if validate:
        for rho in rhos[:: max(1, grid_size // 16)]:
            check_density(rho, tol=1e-7)
    target = np.einsum("ij,nj->ni", ideal_gate(g), psi0)
    overlap = np.einsum("ni,nij,nj->n", target.conj(), rhos, target).real
    return float(np.trapezoid(overlap, thetas) / (2.0 * math.pi))
