"""Command-line front end: config parsing, dispatch, and CSV emission.

Configuration is a flat ``key = value`` text format with ``#`` comments.
Recognized keys (defaults in parentheses):

    schedule.T          (1.0)    total window in time units
    schedule.gamma0_pi  (0.15)   peak intermediate angle, units of pi
    schedule.tau1_T     (0.12)   logistic width, units of T
    schedule.tau2_T     (0.3)    Gaussian width, units of T
    schedule.phi_pi     (0.5)    drive phase, units of pi
    integrator.steps    (4000)   RK4 steps
    integrator.grid_size(4001)   waveform / quadrature grid nodes
    sweep.lambda_min    (-0.2)   systematic sweep range
    sweep.lambda_max    (+0.2)
    sweep.lambda_count  (41)
    sweep.eta_min       (0.0)    amplitude-noise sweep range, units of sqrt(T)
    sweep.eta_max       (0.3)
    sweep.eta_count     (31)
    seed                (42)     SplitMix64 seed for verify draws
    output_dir          (".")

Commands map one-to-one onto the figure-class outputs: design (waveforms.csv),
simulate (trajectory.csv), verify (fig2.csv), metrics (fig5.csv),
sweep-systematic (fig6.csv), sweep-amplitude (fig7.csv), and adiabatic-ref
(adiabatic_ref.csv).  CSVs carry a header line, comma separators, Unix
newlines, and 12-significant-digit values; identical config and seed yield
byte-identical files at any worker count.

Exit codes: 0 success, 1 invariant breach during computation, 2 config error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import control as ctrl
from . import dynamics as dyn
from . import noise
from .control import PulseMetrics
from .errors import ConfigError, InvariantViolation
from .rng import draw_schedule_params
from .schedule import ScheduleParams

__all__ = [
    "COMMANDS",
    "PhysicalScale",
    "RunConfig",
    "apply_overrides",
    "main",
    "parse_config",
    "physical_units",
    "run",
]

COMMANDS = (
    "design",
    "simulate",
    "verify",
    "metrics",
    "sweep-systematic",
    "sweep-amplitude",
    "adiabatic-ref",
)

METRICS_GAMMA0_GRID_PI = np.linspace(0.05, 0.45, 41)

VERIFY_RESIDUAL_TIMES = 101


@dataclass(frozen=True)
class RunConfig:
    T: float = 1.0
    gamma0_pi: float = 0.15
    tau1_T: float = 0.12
    tau2_T: float = 0.3
    phi_pi: float = 0.5
    steps: int = 4000
    grid_size: int = 4001
    lambda_min: float = -0.2
    lambda_max: float = 0.2
    lambda_count: int = 41
    eta_min: float = 0.0
    eta_max: float = 0.3
    eta_count: int = 31
    seed: int = 42
    output_dir: str = "."

    def schedule_params(self) -> ScheduleParams:
        return ScheduleParams(
            tau1=self.tau1_T * self.T,
            tau2=self.tau2_T * self.T,
            gamma0=self.gamma0_pi * np.pi,
            phi=self.phi_pi * np.pi,
            T=self.T,
        )


def _parse_int(text: str) -> int:
    return int(text, 10)


# key -> (field, caster, range check, human-readable bound)
_KEYS = {
    "schedule.T": ("T", float, lambda v: v > 0, "> 0"),
    "schedule.gamma0_pi": ("gamma0_pi", float, lambda v: 0 < v < 0.5, "in (0, 0.5)"),
    "schedule.tau1_T": ("tau1_T", float, lambda v: 0 < v <= 0.12, "in (0, 0.12]"),
    "schedule.tau2_T": ("tau2_T", float, lambda v: 0.2 <= v <= 0.3, "in [0.2, 0.3]"),
    "schedule.phi_pi": ("phi_pi", float, lambda v: 0 < v <= 0.5, "in (0, 0.5]"),
    "integrator.steps": ("steps", _parse_int, lambda v: v >= 1000, ">= 1000"),
    "integrator.grid_size": ("grid_size", _parse_int, lambda v: v >= 512, ">= 512"),
    "sweep.lambda_min": ("lambda_min", float, lambda v: True, ""),
    "sweep.lambda_max": ("lambda_max", float, lambda v: True, ""),
    "sweep.lambda_count": ("lambda_count", _parse_int, lambda v: v >= 2, ">= 2"),
    "sweep.eta_min": ("eta_min", float, lambda v: v >= 0, ">= 0"),
    "sweep.eta_max": ("eta_max", float, lambda v: True, ""),
    "sweep.eta_count": ("eta_count", _parse_int, lambda v: v >= 2, ">= 2"),
    "seed": ("seed", _parse_int, lambda v: v >= 0, ">= 0"),
    "output_dir": ("output_dir", str, lambda v: True, ""),
}

_FIELD_TO_KEY = {spec[0]: key for key, spec in _KEYS.items()}


def _cross_validate(cfg: RunConfig) -> RunConfig:
    if not cfg.lambda_min < cfg.lambda_max:
        raise ConfigError(
            f"sweep.lambda range not ordered: [{cfg.lambda_min}, {cfg.lambda_max}]"
        )
    if not cfg.eta_min < cfg.eta_max:
        raise ConfigError(f"sweep.eta range not ordered: [{cfg.eta_min}, {cfg.eta_max}]")
    cfg.schedule_params()  # ScheduleParams invariants; ranges already key-checked
    return cfg


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a flat key-value config document.

    Unknown keys, malformed lines, and out-of-range values raise ConfigError
    naming the offending line; missing keys take the documented defaults.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        field, cast, check, bound = _KEYS[key]
        try:
            parsed = cast(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: invalid value for '{key}': {value!r}") from exc
        if not check(parsed):
            raise ConfigError(f"line {lineno}: '{key}' out of range, must be {bound}")
        values[field] = parsed
    return _cross_validate(RunConfig(**values))


def apply_overrides(cfg: RunConfig, overrides: dict[str, object]) -> RunConfig:
    """Apply field-level overrides (CLI flags) with the same validation."""
    for field, value in overrides.items():
        key = _FIELD_TO_KEY[field]
        _, _, check, bound = _KEYS[key]
        if not check(value):
            raise ConfigError(f"override '{key}' out of range, must be {bound}")
    return _cross_validate(replace(cfg, **overrides))


@dataclass(frozen=True)
class PhysicalScale:
    """Physical anchoring of the dimensionless interaction-time scale."""

    omega0_max_physical: float
    T_physical: float


def physical_units(metrics: PulseMetrics, omega0_max_physical: float) -> PhysicalScale:
    """Physical window duration given the peak drive amplitude in rad/s."""
    if not omega0_max_physical > 0:
        raise ValueError(
            f"range error: omega0_max_physical must be > 0, got {omega0_max_physical}"
        )
    return PhysicalScale(
        omega0_max_physical=omega0_max_physical,
        T_physical=metrics.time_scale / omega0_max_physical,
    )


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def _write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _cmd_design(cfg: RunConfig, outdir: Path) -> None:
    params = cfg.schedule_params()
    wf = ctrl.sample_waveforms(params, cfg.grid_size)
    path = _write_csv(
        outdir / "waveforms.csv",
        ["t_over_T", "omega_p", "omega_s", "delta1", "delta2"],
        zip(wf.grid / params.T, wf.omega_p, wf.omega_s, wf.delta1, wf.delta2),
    )
    print(f"wrote {path} ({len(wf.grid)} rows)")


def _cmd_simulate(cfg: RunConfig, outdir: Path) -> None:
    params = cfg.schedule_params()
    traj = dyn.evolve(params, steps=cfg.steps)
    fid = dyn.path_fidelity(traj, params)
    pops = traj.populations
    path = _write_csv(
        outdir / "trajectory.csv",
        ["t_over_T", "P_g", "P_a", "P_e", "P_d", "epsilon"],
        zip(
            traj.grid / params.T,
            pops[:, dyn.G],
            pops[:, dyn.A],
            pops[:, dyn.E],
            fid.p_d,
            fid.epsilon,
        ),
    )
    print(f"wrote {path} ({len(traj.grid)} rows)")
    print(f"P_e(t_f)={_fmt(pops[-1, dyn.E])}")


def _cmd_verify(cfg: RunConfig, outdir: Path, draws: int) -> None:
    rows = []
    interior = None
    for index, params in enumerate(draw_schedule_params(cfg.seed, draws, T=cfg.T)):
        traj = dyn.evolve(params, steps=cfg.steps)
        fid = dyn.path_fidelity(traj, params)
        max_eps = float(fid.epsilon.max())
        if interior is None:
            interior = np.linspace(
                params.t_initial, params.t_final, VERIFY_RESIDUAL_TIMES + 2
            )[1:-1]
        envelope_peak = 2.0 * ctrl.pulse_metrics(params, cfg.grid_size).omega0_max
        residual = max(
            max(abs(r.r1), abs(r.r2))
            for r in (dyn.decoupling_residual(params, t) for t in interior)
        )
        rows.append((index, max_eps, residual / envelope_peak))
    path = _write_csv(outdir / "fig2.csv", ["draw", "max_epsilon", "max_residual_rel"], rows)
    worst_eps = max(r[1] for r in rows)
    worst_res = max(r[2] for r in rows)
    print(f"wrote {path} ({len(rows)} rows)")
    print(f"verify: draws={draws} max_epsilon={_fmt(worst_eps)} max_residual_rel={_fmt(worst_res)}")


def _cmd_metrics(cfg: RunConfig, outdir: Path) -> None:
    rows = []
    for g0_pi in METRICS_GAMMA0_GRID_PI:
        params = ScheduleParams(
            tau1=cfg.tau1_T * cfg.T,
            tau2=cfg.tau2_T * cfg.T,
            gamma0=g0_pi * np.pi,
            phi=cfg.phi_pi * np.pi,
            T=cfg.T,
        )
        pm = ctrl.pulse_metrics(params, cfg.grid_size)
        rows.append((g0_pi, pm.time_scale, pm.area / np.pi))
    path = _write_csv(outdir / "fig5.csv", ["gamma0_pi", "T_omega0_max", "area_over_pi"], rows)
    best = min(rows, key=lambda r: r[1])
    print(f"wrote {path} ({len(rows)} rows)")
    print(f"metrics: min T_omega0_max={_fmt(best[1])} at gamma0_pi={_fmt(best[0])}")


def _cmd_sweep_systematic(cfg: RunConfig, outdir: Path, workers: int) -> None:
    params = cfg.schedule_params()
    grid = np.linspace(cfg.lambda_min, cfg.lambda_max, cfg.lambda_count)
    sweep = noise.systematic_sweep(params, grid, steps=cfg.steps, workers=workers)
    path = _write_csv(
        outdir / "fig6.csv",
        ["lambda", "P_e_final"],
        zip(sweep.axis_values, sweep.final_populations),
    )
    top = int(np.argmax(sweep.final_populations))
    print(f"wrote {path} ({len(grid)} rows)")
    print(
        f"sweep-systematic: max P_e={_fmt(sweep.final_populations[top])} "
        f"at lambda={_fmt(sweep.axis_values[top])}"
    )


def _cmd_sweep_amplitude(cfg: RunConfig, outdir: Path, workers: int) -> None:
    params = cfg.schedule_params()
    grid_sqrt_t = np.linspace(cfg.eta_min, cfg.eta_max, cfg.eta_count)
    sweep = noise.amplitude_sweep(
        params, grid_sqrt_t * np.sqrt(cfg.T), steps=cfg.steps, workers=workers
    )
    path = _write_csv(
        outdir / "fig7.csv",
        ["eta_sqrtT", "P_e_final"],
        zip(grid_sqrt_t, sweep.final_populations),
    )
    print(f"wrote {path} ({len(grid_sqrt_t)} rows)")
    print(f"sweep-amplitude: noiseless P_e={_fmt(sweep.final_populations[0])}")


def _cmd_adiabatic_ref(cfg: RunConfig, outdir: Path) -> None:
    ref = ctrl.adiabatic_reference(
        cfg.gamma0_pi * np.pi, cfg.tau1_T * cfg.T, cfg.phi_pi * np.pi, T=cfg.T
    )
    path = _write_csv(
        outdir / "adiabatic_ref.csv",
        ["gamma0_pi", "area_over_pi", "T_omega0_max", "adiabaticity"],
        [(cfg.gamma0_pi, ref.area / np.pi, ref.time_scale, ref.adiabaticity)],
    )
    print(f"wrote {path}")
    print(
        f"adiabatic-ref: area={_fmt(ref.area / np.pi)}pi "
        f"T_omega0_max={_fmt(ref.time_scale)} adiabaticity={_fmt(ref.adiabaticity)}"
    )


def run(command: str, cfg: RunConfig, workers: int = 1, draws: int = 50) -> int:
    """Execute one command; returns 0 on success, lets errors propagate."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command '{command}', expected one of {COMMANDS}")
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    if command == "design":
        _cmd_design(cfg, outdir)
    elif command == "simulate":
        _cmd_simulate(cfg, outdir)
    elif command == "verify":
        _cmd_verify(cfg, outdir, draws)
    elif command == "metrics":
        _cmd_metrics(cfg, outdir)
    elif command == "sweep-systematic":
        _cmd_sweep_systematic(cfg, outdir, workers)
    elif command == "sweep-amplitude":
        _cmd_sweep_amplitude(cfg, outdir, workers)
    elif command == "adiabatic-ref":
        _cmd_adiabatic_ref(cfg, outdir)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sta-qutrit",
        description="Shortcut-pulse design, simulation, and robustness sweeps "
        "for a three-level Raman system.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="path to a flat key = value config file")
    p.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
    p.add_argument("--workers", type=int, default=1, help="sweep worker processes")
    p.add_argument("--draws", type=int, default=50, help="random draws for verify")
    p.add_argument("--t", dest="T", type=float, help="schedule.T")
    p.add_argument("--gamma0-pi", dest="gamma0_pi", type=float, help="schedule.gamma0_pi")
    p.add_argument("--tau1-t", dest="tau1_T", type=float, help="schedule.tau1_T")
    p.add_argument("--tau2-t", dest="tau2_T", type=float, help="schedule.tau2_T")
    p.add_argument("--phi-pi", dest="phi_pi", type=float, help="schedule.phi_pi")
    p.add_argument("--steps", dest="steps", type=int, help="integrator.steps")
    p.add_argument("--grid-size", dest="grid_size", type=int, help="integrator.grid_size")
    p.add_argument("--lambda-min", dest="lambda_min", type=float)
    p.add_argument("--lambda-max", dest="lambda_max", type=float)
    p.add_argument("--lambda-count", dest="lambda_count", type=int)
    p.add_argument("--eta-min", dest="eta_min", type=float)
    p.add_argument("--eta-max", dest="eta_max", type=float)
    p.add_argument("--eta-count", dest="eta_count", type=int)
    p.add_argument("--seed", dest="seed", type=int)
    return p


_OVERRIDE_FIELDS = tuple(f.name for f in fields(RunConfig) if f.name != "output_dir")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text)
        overrides = {
            name: getattr(args, name)
            for name in _OVERRIDE_FIELDS
            if getattr(args, name, None) is not None
        }
        if overrides:
            cfg = apply_overrides(cfg, overrides)
        if args.out is not None:
            cfg = _cross_validate(replace(cfg, output_dir=str(args.out)))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(args.command, cfg, workers=args.workers, draws=args.draws)
    except InvariantViolation as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
