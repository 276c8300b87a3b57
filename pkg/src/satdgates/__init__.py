"""Geometric quantum gates via superadiabatic transitionless driving.

Simulation library for orange-slice-path geometric gates on a driven
two-level system: dressed-state pulse corrections, dynamical-phase
cancellation, fidelity benchmarks under systematic errors and Lindblad
decoherence, and the electron-nuclear controlled-gate extension.
"""

__version__ = "0.1.0"

from .errors import (ContractViolation, ConvergenceFailure,
                     DressedFrameBreakdown, SATDError, SingularGeometry)
from .pulses import DriveParams, Path, PulseSample, adiabatic_sample
from .satd import SATDControls, controls, corrected_pulses
from .gates import GateKind, GateSpec, gate_from_name

__all__ = [
    "ContractViolation", "ConvergenceFailure", "DressedFrameBreakdown",
    "SATDError", "SingularGeometry", "DriveParams", "Path", "PulseSample",
    "adiabatic_sample", "SATDControls", "controls", "corrected_pulses",
    "GateKind", "GateSpec", "gate_from_name", "__version__",
]
