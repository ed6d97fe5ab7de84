"""Robustness of the transfer against systematic and amplitude-noise errors.

Two error models are quantified:

* Systematic miscalibration: the drive couplings are scaled by (1 + lambda)
  while the detunings stay exact, i.e. the state evolves under
  H0(t) + lambda * Hs(t) with Hs the Rabi-coupling part of H0.

* White amplitude noise of strength eta on each Rabi channel independently.
  Averaged over noise realizations the density matrix obeys

      drho/dt = -i [H0, rho]
                - (eta^2/2) [Hp, [Hp, rho]] - (eta^2/2) [Hs, [Hs, rho]]

  with Hp, Hs the pump/Stokes coupling operators.  eta carries units of
  sqrt(time) so that eta^2 [H,[H,rho]] is a rate.

Sweep points are independent pure computations: they may be fanned out
across worker processes, results are merged in input order, and the output
is bitwise identical for any worker count.  Positivity and trace of the
density matrix are checked, never projected; a violation means the step
count is too low and raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import control as ctrl
from . import dynamics as dyn
from .control import ControlSample
from .errors import IntegrationAccuracyError, InvariantViolation
from .schedule import ScheduleParams

__all__ = [
    "DensityResult",
    "SweepResult",
    "amplitude_sweep",
    "check_density_matrix",
    "evolve_density",
    "master_rhs",
    "pump_channel",
    "stokes_channel",
    "systematic_evolve",
    "systematic_sweep",
]

TRACE_TOL = 1e-9
HERMITICITY_TOL = 1e-10
POSITIVITY_TOL = -1e-9

GROUND_DENSITY = np.diag([1.0, 0.0, 0.0]).astype(complex)


@dataclass(frozen=True)
class SweepResult:
    """Final target-state populations along one noise axis."""

    axis_name: str
    axis_values: np.ndarray
    final_populations: np.ndarray
    params: ScheduleParams


@dataclass(frozen=True)
class DensityResult:
    """Final density matrix with integration diagnostics.

    max_trace_drift and max_hermiticity_defect are maxima over the whole
    integration, not just the endpoint; min_eigenvalue is evaluated on the
    final state.
    """

    rho: np.ndarray
    p_e: float
    max_trace_drift: float
    max_hermiticity_defect: float
    min_eigenvalue: float


def pump_channel(sample: ControlSample) -> np.ndarray:
    """Noise operator of the pump drive: (1/2) Omega_p |a><g| + h.c."""
    shape = np.shape(sample.omega_p)
    h = np.zeros(shape + (3, 3), dtype=complex)
    h[..., dyn.A, dyn.G] = 0.5 * np.asarray(sample.omega_p)
    h[..., dyn.G, dyn.A] = h[..., dyn.A, dyn.G]
    return h


def stokes_channel(sample: ControlSample) -> np.ndarray:
    """Noise operator of the Stokes drive: (1/2) Omega_s |a><e| + h.c."""
    shape = np.shape(sample.omega_s)
    h = np.zeros(shape + (3, 3), dtype=complex)
    h[..., dyn.A, dyn.E] = 0.5 * np.asarray(sample.omega_s)
    h[..., dyn.E, dyn.A] = h[..., dyn.A, dyn.E]
    return h


def systematic_evolve(
    params: ScheduleParams,
    lam: float,
    psi0: np.ndarray | None = None,
    steps: int = 4000,
) -> float:
    """Final excited-state population under a fractional drive miscalibration.

    lam scales only the Rabi couplings; the detunings are left exact.
    """
    if steps < 1000:
        raise ValueError(f"steps must be >= 1000, got {steps}")
    psi0 = dyn.GROUND_STATE if psi0 is None else np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("psi0 not normalized")
    t_half = dyn.half_step_grid(params, steps)
    sample = ctrl.synthesize(params, t_half)
    h_half = dyn.hamiltonian(sample) + lam * dyn.coupling_hamiltonian(sample)
    psi = dyn.integrate_schrodinger(h_half, params.T / steps, psi0, store=False)
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > dyn.NORM_DRIFT_LIMIT:
        raise IntegrationAccuracyError(
            f"integration accuracy: norm drift {drift:.3e}; raise steps"
        )
    return float(abs(psi[dyn.E]) ** 2)


def master_rhs(rho: np.ndarray, sample: ControlSample, eta: float) -> np.ndarray:
    """Time derivative of the density matrix under drive plus amplitude noise."""
    h0 = dyn.hamiltonian(sample)
    d = -1j * (h0 @ rho - rho @ h0)
    w = 0.5 * eta * eta
    for ha in (pump_channel(sample), stokes_channel(sample)):
        inner = ha @ rho - rho @ ha
        d = d - w * (ha @ inner - inner @ ha)
    return d


def check_density_matrix(rho: np.ndarray) -> None:
    """Validate hermiticity, unit trace, and positivity; raise on breach."""
    rho = np.asarray(rho)
    herm = float(np.abs(rho - rho.conj().T).max())
    if herm > HERMITICITY_TOL:
        raise InvariantViolation(f"density invariant violated: hermiticity defect {herm:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvariantViolation(f"density invariant violated: trace {tr!r}")
    vmin = float(np.linalg.eigvalsh(rho).min())
    if vmin < POSITIVITY_TOL:
        raise InvariantViolation(f"density invariant violated: min eigenvalue {vmin:.3e}")


def evolve_density(
    params: ScheduleParams,
    eta: float,
    rho0: np.ndarray | None = None,
    steps: int = 4000,
) -> DensityResult:
    """RK4 integration of the noise-averaged master equation across the window.

    The trace and hermiticity invariants are monitored at every step and the
    final state must be positive to -1e-9; breaches raise rather than being
    repaired, since they signal an insufficient step count.
    """
    if steps < 1000:
        raise ValueError(f"steps must be >= 1000, got {steps}")
    rho = GROUND_DENSITY.copy() if rho0 is None else np.asarray(rho0, dtype=complex).copy()
    check_density_matrix(rho)
    t_half = dyn.half_step_grid(params, steps)
    sample = ctrl.synthesize(params, t_half)
    h0 = dyn.hamiltonian(sample)
    hp = pump_channel(sample)
    hs = stokes_channel(sample)
    dt = params.T / steps
    w = 0.5 * eta * eta

    def rhs(idx: int, r: np.ndarray) -> np.ndarray:
        h = h0[idx]
        d = -1j * (h @ r - r @ h)
        for ha in (hp[idx], hs[idx]):
            inner = ha @ r - r @ ha
            d = d - w * (ha @ inner - inner @ ha)
        return d

    max_trace = 0.0
    max_herm = 0.0
    sixth = dt / 6.0
    half = 0.5 * dt
    for k in range(steps):
        i0, im, i1 = 2 * k, 2 * k + 1, 2 * k + 2
        k1 = rhs(i0, rho)
        k2 = rhs(im, rho + half * k1)
        k3 = rhs(im, rho + half * k2)
        k4 = rhs(i1, rho + dt * k3)
        rho = rho + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        max_trace = max(max_trace, abs(complex(np.trace(rho)) - 1.0))
        max_herm = max(max_herm, float(np.abs(rho - rho.conj().T).max()))
    min_eig = float(np.linalg.eigvalsh(rho).min())
    if max_trace > TRACE_TOL:
        raise IntegrationAccuracyError(
            f"integration accuracy: trace drift {max_trace:.3e}; raise steps"
        )
    if max_herm > HERMITICITY_TOL:
        raise IntegrationAccuracyError(
            f"integration accuracy: hermiticity defect {max_herm:.3e}; raise steps"
        )
    if min_eig < POSITIVITY_TOL:
        raise IntegrationAccuracyError(
            f"integration accuracy: min eigenvalue {min_eig:.3e}; raise steps"
        )
    return DensityResult(
        rho=rho,
        p_e=float(abs(rho[dyn.E, dyn.E])),
        max_trace_drift=max_trace,
        max_hermiticity_defect=max_herm,
        min_eigenvalue=min_eig,
    )


def _systematic_point(lam: float, params: ScheduleParams, steps: int) -> float:
    return systematic_evolve(params, lam, steps=steps)


def _amplitude_point(eta: float, params: ScheduleParams, steps: int) -> float:
    return evolve_density(params, eta, steps=steps).p_e


def _map_ordered(fn, values, workers: int | None) -> list[float]:
    if workers is None or workers <= 1:
        return [fn(v) for v in values]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, values))


def _as_sweep(axis_name, values, populations, params) -> SweepResult:
    populations = np.asarray(populations, dtype=float)
    if np.any(populations < -1e-12) or np.any(populations > 1.0 + 1e-12):
        raise InvariantViolation(
            f"sweep invariant violated: population outside [0, 1]: {populations}"
        )
    return SweepResult(
        axis_name=axis_name,
        axis_values=np.asarray(values, dtype=float),
        final_populations=populations,
        params=params,
    )


def systematic_sweep(
    params: ScheduleParams,
    lambda_grid,
    steps: int = 4000,
    workers: int | None = None,
) -> SweepResult:
    """Final populations across a grid of miscalibration fractions."""
    lambda_grid = np.atleast_1d(np.asarray(lambda_grid, dtype=float))
    if lambda_grid.size == 0:
        raise ValueError("lambda grid must be nonempty")
    fn = partial(_systematic_point, params=params, steps=steps)
    return _as_sweep("lambda", lambda_grid, _map_ordered(fn, lambda_grid, workers), params)


def amplitude_sweep(
    params: ScheduleParams,
    eta_grid,
    steps: int = 4000,
    workers: int | None = None,
) -> SweepResult:
    """Final populations across a grid of amplitude-noise strengths."""
    eta_grid = np.atleast_1d(np.asarray(eta_grid, dtype=float))
    if eta_grid.size == 0:
        raise ValueError("eta grid must be nonempty")
    fn = partial(_amplitude_point, params=params, steps=steps)
    return _as_sweep("eta", eta_grid, _map_ordered(fn, eta_grid, workers), params)
