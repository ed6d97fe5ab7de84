"""Reverse-engineered control pulses and their speed/energy metrics.

Given a path schedule, the two Rabi frequencies and two detunings are solved
in closed form from the requirement that the designed path stays exactly
decoupled from its orthogonal partners.  With the constant-phase convention
(phase1 = +phi, phase2 = -phi) the controls reduce to

    Omega_p = (2/sin phi) (theta_dot cot(gamma) sin(theta) + gamma_dot cos(theta))
    Omega_s = (2/sin phi) (theta_dot cot(gamma) cos(theta) - gamma_dot sin(theta))
    Delta_2 = -2 cot(phi) (theta_dot cot(2 theta) - gamma_dot tan(gamma))
    Delta_1 = -2 cot(phi) cot(2 gamma)
                 (theta_dot cot(gamma) sin(2 theta) + gamma_dot cos(2 theta))
              + Delta_2 sin^2(theta)

and both detunings vanish identically on resonance (phi = pi/2).  The same
pulses admit the polar form Omega_p = Omega_0 sin(theta~),
Omega_s = Omega_0 cos(theta~) with the envelope
Omega_0 = (2/sin phi) sqrt(theta_dot^2 cot^2 gamma + gamma_dot^2).

Singular-looking products near the window edges (theta_dot tan theta,
theta_dot cot 2theta) are taken from the schedule module in their
cancellation-free forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import schedule as sched
from .schedule import ScheduleParams

__all__ = [
    "AdiabaticReference",
    "ControlSample",
    "Envelope",
    "PulseMetrics",
    "Waveforms",
    "adiabatic_reference",
    "envelope",
    "global_phase",
    "global_phase_profile",
    "pulse_metrics",
    "sample_waveforms",
    "synthesize",
    "synthesize_general",
]

_HALF_PI = 0.5 * np.pi


@dataclass(frozen=True)
class ControlSample:
    """Rabi frequencies and detunings at one time (fields may be arrays)."""

    t: np.ndarray | float
    omega_p: np.ndarray | float
    omega_s: np.ndarray | float
    delta1: np.ndarray | float
    delta2: np.ndarray | float


@dataclass(frozen=True)
class Waveforms:
    """Controls sampled on a uniform grid spanning the full window."""

    grid: np.ndarray
    omega_p: np.ndarray
    omega_s: np.ndarray
    delta1: np.ndarray
    delta2: np.ndarray
    params: ScheduleParams


@dataclass(frozen=True)
class Envelope:
    """Polar form of the Rabi pair: amplitude and mixing angle."""

    omega0: np.ndarray | float
    theta_tilde: np.ndarray | float


@dataclass(frozen=True)
class PulseMetrics:
    """Speed and energy figures of one pulse set.

    area is the window integral of sqrt(Omega_p^2 + Omega_s^2) (radians).
    omega0_max is the peak envelope amplitude in the reporting normalization
    used by the published reference values, which is half the peak of
    sqrt(Omega_p^2 + Omega_s^2); the drive amplitude actually applied to the
    system peaks at twice this number.  time_scale = T * omega0_max.
    """

    area: float
    omega0_max: float
    time_scale: float


@dataclass(frozen=True)
class AdiabaticReference:
    """Closed-form figures for the constant-gamma (dark-state passage) limit.

    Unlike PulseMetrics.omega0_max, the amplitude here is the full peak of
    the drive envelope, matching the closed forms quoted for this limit:
    area = pi cot(gamma0)/sin(phi), omega0_max = pi cot(gamma0)/(4 tau1 sin phi).
    adiabaticity = sqrt(2) cot(gamma0) is the ratio suppressing transitions
    out of the dark state; the passage is adiabatic only when it is >> 1.
    """

    area: float
    omega0_max: float
    time_scale: float
    adiabaticity: float


def _cot(x: float) -> float:
    """Cotangent with exact zeros at +-pi/2 so resonance gives exact-zero detunings."""
    if x == _HALF_PI or x == -_HALF_PI:
        return 0.0
    return np.cos(x) / np.sin(x)


def synthesize(params: ScheduleParams, t) -> ControlSample:
    """Controls that keep the designed path exactly decoupled, phase1 = -phase2 = phi.

    Accepts scalar or array t inside the window.  gamma0 = 0 schedules are
    rejected at ScheduleParams construction (cot gamma would diverge).
    """
    s = sched.evaluate(params, t)
    phi = params.phi
    sin_phi = np.sin(phi)
    cot_phi = _cot(phi)
    cot_g = 1.0 / np.tan(s.gamma)
    st, ct = np.sin(s.theta), np.cos(s.theta)
    a = s.theta_dot * cot_g
    omega_p = 2.0 / sin_phi * (a * st + s.gamma_dot * ct)
    omega_s = 2.0 / sin_phi * (a * ct - s.gamma_dot * st)
    if cot_phi == 0.0:
        delta1 = 0.0 if np.ndim(t) == 0 else np.zeros_like(np.asarray(s.theta, dtype=float))
        delta2 = 0.0 if np.ndim(t) == 0 else np.zeros_like(np.asarray(s.theta, dtype=float))
    else:
        tdc2t = sched.theta_dot_cot_2theta(params, t)
        delta2 = -2.0 * cot_phi * (tdc2t - s.gamma_dot * np.tan(s.gamma))
        cot_2g = np.cos(2 * s.gamma) / np.sin(2 * s.gamma)
        delta1 = (
            -2.0 * cot_phi * cot_2g * (a * np.sin(2 * s.theta) + s.gamma_dot * np.cos(2 * s.theta))
            + delta2 * st**2
        )
    return ControlSample(s.t, omega_p, omega_s, delta1, delta2)


def synthesize_general(params: ScheduleParams, t, phase1: float, phase2: float) -> ControlSample:
    """Decoupling controls for independent constant phases phase1, phase2.

    Requires sin(phase1) != 0 and sin(phase2) != 0.  With
    phase1 = -phase2 = params.phi this reduces exactly to synthesize().
    """
    if min(abs(np.sin(phase1)), abs(np.sin(phase2))) < 1e-9:
        raise ValueError("phases with sin(phase) ~ 0 make the control solution singular")
    s = sched.evaluate(params, t)
    cot_g = 1.0 / np.tan(s.gamma)
    tan_g = np.tan(s.gamma)
    st, ct = np.sin(s.theta), np.cos(s.theta)
    a = s.theta_dot * cot_g
    omega_p = 2.0 / np.sin(phase1) * (a * st + s.gamma_dot * ct)
    omega_s = 2.0 / np.sin(phase2) * (-a * ct + s.gamma_dot * st)
    cot1, cot2 = _cot(phase1), _cot(phase2)
    td_tan = sched.theta_dot_tan_theta(params, t)
    td_cot = td_tan + 2.0 * sched.theta_dot_cot_2theta(params, t)
    delta2 = tan_g * (
        cot1 * (td_tan * cot_g + s.gamma_dot) + cot2 * (td_cot * cot_g - s.gamma_dot)
    )
    cot_2g = np.cos(2 * s.gamma) / np.sin(2 * s.gamma)
    delta1 = (
        -cot_2g * (omega_p * ct * np.cos(phase1) + omega_s * st * np.cos(phase2))
        + delta2 * st**2
    )
    return ControlSample(s.t, omega_p, omega_s, delta1, delta2)


def envelope(params: ScheduleParams, t) -> Envelope:
    """Polar envelope and mixing angle of the Rabi pair.

    omega0^2 = omega_p^2 + omega_s^2 holds pointwise; theta_tilde uses the
    two-argument arctangent, which is safe because theta_dot cot(gamma) > 0
    on the whole window.
    """
    s = sched.evaluate(params, t)
    a = s.theta_dot / np.tan(s.gamma)
    omega0 = 2.0 / np.sin(params.phi) * np.hypot(a, s.gamma_dot)
    theta_tilde = s.theta + np.arctan2(s.gamma_dot, a)
    return Envelope(omega0, theta_tilde)


def _phase_rate(params: ScheduleParams, t):
    """Integrand of the accumulated path phase (constant-phase convention)."""
    s = sched.evaluate(params, t)
    return (sched.theta_dot_tan_theta(params, t) + s.gamma_dot * np.tan(s.gamma)) * _cot(
        params.phi
    )


def global_phase(params: ScheduleParams, t: float, intervals: int = 2000) -> float:
    """Accumulated phase of the tracked path state from the window start to t.

    beta0(t) = -int_{t_i}^{t} (theta_dot tan theta + gamma_dot tan gamma) cot(phi) dt'

    evaluated by composite Simpson with analytic midpoint samples; the
    theta_dot tan(theta) factor is the edge-stable form.  Identically zero
    on resonance (cot phi = 0).
    """
    t_i = params.t_initial
    if t == t_i or _cot(params.phi) == 0.0:
        return 0.0
    nodes = np.linspace(t_i, t, intervals + 1)
    return float(_cumulative_phase(params, nodes)[-1])


def global_phase_profile(params: ScheduleParams, grid: np.ndarray) -> np.ndarray:
    """beta0 at every node of an increasing time grid starting at -T/2."""
    grid = np.asarray(grid, dtype=float)
    if _cot(params.phi) == 0.0:
        return np.zeros_like(grid)
    return _cumulative_phase(params, grid)


def _cumulative_phase(params: ScheduleParams, nodes: np.ndarray) -> np.ndarray:
    mid = 0.5 * (nodes[:-1] + nodes[1:])
    f_nodes = _phase_rate(params, nodes)
    f_mid = _phase_rate(params, mid)
    h = np.diff(nodes)
    segments = h / 6.0 * (f_nodes[:-1] + 4.0 * f_mid + f_nodes[1:])
    out = np.empty_like(nodes)
    out[0] = 0.0
    np.cumsum(segments, out=out[1:])
    return -out


def pulse_metrics(params: ScheduleParams, grid_size: int = 4001) -> PulseMetrics:
    """Pulse area and interaction-time scale on the full window.

    The area integrates sqrt(Omega_p^2 + Omega_s^2) by composite Simpson on
    a uniform grid (grid_size forced odd so every panel is complete).
    """
    if grid_size < 512:
        raise ValueError(f"grid_size must be >= 512 for metrics, got {grid_size}")
    n = grid_size if grid_size % 2 == 1 else grid_size + 1
    t = np.linspace(params.t_initial, params.t_final, n)
    om = envelope(params, t).omega0
    area = float(simpson(om, x=t))
    omega0_max = 0.5 * float(om.max())
    return PulseMetrics(area=area, omega0_max=omega0_max, time_scale=params.T * omega0_max)


def adiabatic_reference(
    gamma0: float, tau1: float, phi: float, T: float = 1.0
) -> AdiabaticReference:
    """Closed-form dark-state-passage reference for gamma held constant at gamma0.

    The logistic theta ramp sweeps pi/2 in total, so the drive area is
    pi cot(gamma0)/sin(phi) and the envelope peaks at the ramp midpoint with
    pi cot(gamma0)/(4 tau1 sin phi).
    """
    if not 0 < gamma0 < _HALF_PI:
        raise ValueError(f"gamma0 must lie in (0, pi/2), got {gamma0}")
    if not tau1 > 0:
        raise ValueError(f"tau1 must be positive, got {tau1}")
    if not 0 < phi <= _HALF_PI:
        raise ValueError(f"phi must lie in (0, pi/2], got {phi}")
    cot_g0 = 1.0 / np.tan(gamma0)
    sin_phi = np.sin(phi)
    area = np.pi * cot_g0 / sin_phi
    omega0_max = np.pi * cot_g0 / (4.0 * tau1 * sin_phi)
    return AdiabaticReference(
        area=float(area),
        omega0_max=float(omega0_max),
        time_scale=float(T * omega0_max),
        adiabaticity=float(np.sqrt(2.0) * cot_g0),
    )


def sample_waveforms(params: ScheduleParams, grid_size: int) -> Waveforms:
    """Controls on a uniform inclusive grid over [-T/2, T/2]."""
    if grid_size < 2:
        raise ValueError(f"grid_size must be >= 2, got {grid_size}")
    t = np.linspace(params.t_initial, params.t_final, grid_size)
    c = synthesize(params, t)
    return Waveforms(
        grid=t,
        omega_p=np.asarray(c.omega_p, dtype=float),
        omega_s=np.asarray(c.omega_s, dtype=float),
        delta1=np.asarray(c.delta1, dtype=float),
        delta2=np.asarray(c.delta2, dtype=float),
        params=params,
    )
