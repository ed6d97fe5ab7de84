"""Shortcut-pulse toolkit for a three-level Raman (qutrit) system.

The package designs drive pulses that force the system to follow a chosen
nonadiabatic evolution path exactly, verifies that claim by direct
integration of the dynamics, and quantifies speed (pulse area,
interaction-time scale) and robustness (systematic miscalibration and
amplitude noise).
"""

from .basis import FrameBasis, basis_vectors, compose, elementary_matrix, lambda_frame
from .control import (
    AdiabaticReference,
    ControlSample,
    Envelope,
    PulseMetrics,
    Waveforms,
    adiabatic_reference,
    envelope,
    global_phase,
    pulse_metrics,
    sample_waveforms,
    synthesize,
)
from .dynamics import (
    StateTrajectory,
    dark_state_analysis,
    decoupling_residual,
    evolve,
    hamiltonian,
    path_fidelity,
    phase_consistency,
)
from .errors import ConfigError, IntegrationAccuracyError, InvariantViolation
from .noise import (
    SweepResult,
    amplitude_sweep,
    evolve_density,
    master_rhs,
    systematic_evolve,
    systematic_sweep,
)
from .schedule import ScheduleParams, ScheduleSample, check_boundaries, evaluate

__version__ = "0.1.0"

__all__ = [
    "AdiabaticReference",
    "ConfigError",
    "ControlSample",
    "Envelope",
    "FrameBasis",
    "IntegrationAccuracyError",
    "InvariantViolation",
    "PulseMetrics",
    "ScheduleParams",
    "ScheduleSample",
    "StateTrajectory",
    "SweepResult",
    "Waveforms",
    "adiabatic_reference",
    "amplitude_sweep",
    "basis_vectors",
    "check_boundaries",
    "compose",
    "dark_state_analysis",
    "decoupling_residual",
    "elementary_matrix",
    "envelope",
    "evaluate",
    "evolve",
    "evolve_density",
    "global_phase",
    "hamiltonian",
    "lambda_frame",
    "master_rhs",
    "path_fidelity",
    "phase_consistency",
    "pulse_metrics",
    "sample_waveforms",
    "synthesize",
    "systematic_evolve",
    "systematic_sweep",
]
