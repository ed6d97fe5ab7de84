"""Time-dependent path-angle schedules and their boundary diagnostics.

The mixing angle theta(t) ramps from 0 to pi/2 through a logistic of width
tau1, and the intermediate-level angle gamma(t) is a Gaussian of width tau2
peaking at gamma0.  Both are evaluated on the symmetric window
t in [-T/2, +T/2]; the logistic midpoint and the Gaussian peak sit at t = 0
so the ramp boundaries are met (approximately) at both window ends.

All quantities are dimensionless: time in units of T, rates in 1/T.
Closed-form derivatives are provided alongside the values, plus
cancellation-free composite products (theta_dot * tan(theta) and
theta_dot * cot(2 theta)) that stay finite where the bare factors diverge
at the window edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

__all__ = [
    "BoundaryReport",
    "ScheduleParams",
    "ScheduleSample",
    "check_boundaries",
    "evaluate",
    "theta_dot_cot_2theta",
    "theta_dot_tan_theta",
]

_HALF_PI = 0.5 * np.pi


@dataclass(frozen=True)
class ScheduleParams:
    """Schedule parameter set {tau1, tau2, gamma0, phi, T}.

    tau1 is the logistic ramp width, tau2 the Gaussian width, gamma0 the
    peak intermediate-level mixing angle, phi the constant drive phase
    (phase1 = +phi, phase2 = -phi convention), and T the total window.
    Bounds follow the operating envelope of the protocol; tau1 = 0.12 T and
    the tau2 endpoints are admitted.
    """

    tau1: float
    tau2: float
    gamma0: float
    phi: float
    T: float = 1.0

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"schedule invariant violated: T > 0 (got {self.T})")
        if not 0 < self.tau1 <= 0.12 * self.T:
            raise ValueError(
                f"schedule invariant violated: 0 < tau1 <= 0.12*T (got tau1={self.tau1}, T={self.T})"
            )
        if not 0.2 * self.T <= self.tau2 <= 0.3 * self.T:
            raise ValueError(
                f"schedule invariant violated: 0.2*T <= tau2 <= 0.3*T (got tau2={self.tau2}, T={self.T})"
            )
        if not 0 < self.gamma0 < 0.5 * np.pi:
            raise ValueError(
                f"schedule invariant violated: 0 < gamma0 < pi/2 (got {self.gamma0})"
            )
        if not 0 < self.phi <= 0.5 * np.pi:
            raise ValueError(
                f"schedule invariant violated: 0 < phi <= pi/2 (got {self.phi})"
            )

    @property
    def t_initial(self) -> float:
        return -0.5 * self.T

    @property
    def t_final(self) -> float:
        return 0.5 * self.T


@dataclass(frozen=True)
class ScheduleSample:
    """Angles and rates at one time (fields may be numpy arrays)."""

    t: np.ndarray | float
    theta: np.ndarray | float
    theta_dot: np.ndarray | float
    gamma: np.ndarray | float
    gamma_dot: np.ndarray | float


def _check_window(params: ScheduleParams, t) -> None:
    limit = 0.5 * params.T * (1.0 + 1e-12)
    if np.any(np.abs(t) > limit):
        raise ValueError(
            f"domain error: t outside [-T/2, T/2] (T={params.T}, got {np.max(np.abs(t))})"
        )


def evaluate(params: ScheduleParams, t) -> ScheduleSample:
    """Angles theta, gamma and their exact rates at time(s) t.

    theta     = (pi/2) / (1 + exp(-t/tau1))
    gamma     = gamma0 * exp(-(t/tau2)^2)
    theta_dot = (pi/2) * exp(-t/tau1) / (tau1 * (1 + exp(-t/tau1))^2)
    gamma_dot = -(2 t / tau2^2) * gamma

    The logistic is evaluated through expit on both t/tau1 and -t/tau1, which
    keeps theta_dot accurate deep into the tails.
    """
    t = np.asarray(t, dtype=float)
    _check_window(params, t)
    s = expit(t / params.tau1)
    s_c = expit(-t / params.tau1)
    theta = _HALF_PI * s
    theta_dot = _HALF_PI * s * s_c / params.tau1
    gamma = params.gamma0 * np.exp(-((t / params.tau2) ** 2))
    gamma_dot = -2.0 * t / params.tau2**2 * gamma
    if t.ndim == 0:
        return ScheduleSample(
            float(t), float(theta), float(theta_dot), float(gamma), float(gamma_dot)
        )
    return ScheduleSample(t, theta, theta_dot, gamma, gamma_dot)


def _half_sine_ratio(x):
    """x / sin(pi x / 2) with the x -> 0 limit 2/pi filled in."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, np.sin(_HALF_PI * x))
    return np.where(x == 0.0, 2.0 / np.pi, x / safe)


def theta_dot_tan_theta(params: ScheduleParams, t):
    """theta_dot * tan(theta) without forming the diverging tangent.

    tan(theta) blows up as theta -> pi/2 at the right window edge while
    theta_dot vanishes; the product tends to 1/tau1.  Writing
    cos(theta) = sin(pi (1 - s) / 2) for the logistic fraction s turns the
    product into a ratio of same-scale small quantities.
    """
    t = np.asarray(t, dtype=float)
    s = expit(t / params.tau1)
    s_c = expit(-t / params.tau1)
    out = _HALF_PI / params.tau1 * s * np.sin(_HALF_PI * s) * _half_sine_ratio(s_c)
    return float(out) if t.ndim == 0 else out


def _theta_dot_cot_theta(params: ScheduleParams, t):
    t = np.asarray(t, dtype=float)
    s = expit(t / params.tau1)
    s_c = expit(-t / params.tau1)
    out = _HALF_PI / params.tau1 * s_c * np.cos(_HALF_PI * s) * _half_sine_ratio(s)
    return float(out) if t.ndim == 0 else out


def theta_dot_cot_2theta(params: ScheduleParams, t):
    """theta_dot * cot(2 theta), finite at both window edges (limit 1/(2 tau1))."""
    return 0.5 * (_theta_dot_cot_theta(params, t) - theta_dot_tan_theta(params, t))


@dataclass(frozen=True)
class BoundaryReport:
    """Deviations of the schedule from its ideal ramp boundaries.

    The ideal boundaries are theta(t_i) = 0, theta(t_f) = pi/2 and
    gamma = gamma_dot = 0 at both ends; a finite window only meets them
    approximately.  `passed` gates the four angle deviations (radians)
    against the tolerance.  The endpoint rates are reported for inspection
    but not gated: they are tied to the angle residuals by the fixed factor
    T/tau2^2, so gating the angles already bounds them.
    """

    theta_initial: float
    theta_final_dev: float
    gamma_initial: float
    gamma_final: float
    gamma_dot_initial: float
    gamma_dot_final: float
    tol: float
    passed: bool


def check_boundaries(params: ScheduleParams, tol: float = 0.05) -> BoundaryReport:
    """Quantify the window-truncation residuals of the ramp boundaries."""
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    lo = evaluate(params, params.t_initial)
    hi = evaluate(params, params.t_final)
    angle_devs = (
        lo.theta,
        hi.theta - _HALF_PI,
        lo.gamma,
        hi.gamma,
    )
    passed = all(abs(d) <= tol for d in angle_devs)
    return BoundaryReport(
        theta_initial=lo.theta,
        theta_final_dev=hi.theta - _HALF_PI,
        gamma_initial=lo.gamma,
        gamma_final=hi.gamma,
        gamma_dot_initial=lo.gamma_dot,
        gamma_dot_final=hi.gamma_dot,
        tol=tol,
        passed=passed,
    )
