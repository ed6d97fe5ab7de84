"""End-to-end acceptance checks against the published reference behavior.

Each criterion prints one `criterion N: PASS/FAIL` line (visible with
``pytest -s``).  Two clauses are asserted exactly as stated even though this
implementation demonstrably cannot meet them, because the stated numbers are
internally inconsistent with the defining formulas; the failure messages and
the neighboring characterization tests pin down the measured facts.  See
README "Known reference-value deviations".
"""

import time

import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.special import expit

from sta_qutrit import cli
from sta_qutrit.cli import RunConfig
from sta_qutrit.control import (
    adiabatic_reference,
    envelope,
    pulse_metrics,
    synthesize,
)
from sta_qutrit.dynamics import decoupling_residual, evolve, path_fidelity
from sta_qutrit.noise import evolve_density, systematic_evolve, systematic_sweep
from sta_qutrit.rng import draw_schedule_params
from sta_qutrit.schedule import ScheduleParams

PI = np.pi

FIG3 = ScheduleParams(tau1=0.115, tau2=0.3, gamma0=0.15 * PI, phi=0.25 * PI)
FIG4 = ScheduleParams(tau1=0.115, tau2=0.3, gamma0=0.15 * PI, phi=0.5 * PI)
FIG5 = ScheduleParams(tau1=0.12, tau2=0.3, gamma0=0.3 * PI, phi=0.5 * PI)
DEFAULTS = ScheduleParams(tau1=0.12, tau2=0.3, gamma0=0.15 * PI, phi=0.5 * PI)

GAMMA0_GRID_PI = np.linspace(0.05, 0.45, 41)


def _line(criterion: str, ok: bool, detail: str) -> None:
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def fig5_table():
    rows = []
    for g0_pi in GAMMA0_GRID_PI:
        p = ScheduleParams(tau1=0.12, tau2=0.3, gamma0=g0_pi * PI, phi=0.5 * PI)
        m = pulse_metrics(p)
        rows.append((g0_pi, m.time_scale, m.area / PI))
    return np.array(rows)


@pytest.fixture(scope="module")
def default_lambda_sweep():
    grid = np.linspace(-0.2, 0.2, 41)
    return systematic_sweep(DEFAULTS, grid, steps=2000)


def test_criterion_1_off_resonant_transfer():
    start = time.perf_counter()
    traj = evolve(FIG3, steps=4000)
    elapsed = time.perf_counter() - start
    p_e = traj.populations[-1, 2]
    ok = abs(p_e - 0.9997) <= 5e-4 and elapsed < 1.0
    _line("1", ok, f"P_e(t_f)={p_e:.6f} (target 0.9997+-5e-4), runtime {elapsed:.3f}s")
    assert abs(p_e - 0.9997) <= 5e-4
    assert elapsed < 1.0


def test_criterion_2_resonant_transfer():
    c = synthesize(FIG4, np.linspace(-0.5, 0.5, 201))
    zero_detunings = bool(np.all(np.asarray(c.delta1) == 0.0) and np.all(np.asarray(c.delta2) == 0.0))
    p_e = evolve(FIG4, steps=4000).populations[-1, 2]
    ok = zero_detunings and abs(p_e - 0.9995) <= 5e-4
    _line("2", ok, f"P_e(t_f)={p_e:.6f} (target 0.9995+-5e-4), detunings zero: {zero_detunings}")
    assert zero_detunings
    assert abs(p_e - 0.9995) <= 5e-4


def test_criterion_3_time_scale_at_reference_point():
    m = pulse_metrics(FIG5)
    ok = abs(m.time_scale - 3.696) <= 0.01
    _line("3 (time scale)", ok, f"T*Omega0_max={m.time_scale:.5f} (target 3.696+-0.01)")
    assert abs(m.time_scale - 3.696) <= 0.01


def test_criterion_3_pulse_area_at_reference_point():
    # Asserted exactly as stated.  Measured fact: the full-window pulse area
    # at gamma0 = 0.3 pi is 2.0501 pi.  The reference number 1.907 pi is the
    # minimum of the same area curve, attained near gamma0 = 0.39 pi (see the
    # characterization test below); no quadrature convention yields 1.907 pi
    # at 0.3 pi together with 3.696 for the time scale.
    m = pulse_metrics(FIG5)
    ok = abs(m.area / PI - 1.907) <= 0.01
    _line("3 (pulse area)", ok, f"area={m.area / PI:.5f}pi at gamma0=0.3pi (stated 1.907pi+-0.01pi)")
    assert ok, (
        f"area at gamma0=0.3pi is {m.area / PI:.5f}pi, not 1.907pi+-0.01pi; "
        "1.907pi is this curve's minimum, reached near gamma0=0.39pi "
        "(see README, Known reference-value deviations)"
    )


def test_criterion_3_metric_trends(fig5_table):
    g0, ts, area = fig5_table[:, 0], fig5_table[:, 1], fig5_table[:, 2]
    checks = []
    for series in (ts, area):
        imin = int(np.argmin(series))
        pre = np.diff(series[: imin + 1])
        post = np.diff(series[imin:])
        checks.append(np.all(pre < 0))  # strictly decreasing into the minimum
        checks.append(g0[imin] >= 0.28)  # minimum not before ~0.3 pi
        checks.append(np.all(post >= 0) and (post.size == 0 or post.max() <= 0.02))
        drop = series[0] - series[imin]
        rise = series[-1] - series[imin]
        checks.append(rise <= 0.15 * drop)  # the increase is slow
    ts_argmin = g0[int(np.argmin(ts))]
    ok = all(bool(c) for c in checks) and 0.28 <= ts_argmin <= 0.34
    _line(
        "3 (trends)",
        ok,
        f"time-scale minimum at gamma0={ts_argmin:.2f}pi, "
        f"area minimum at gamma0={g0[int(np.argmin(area))]:.2f}pi, both flat past the minimum",
    )
    assert all(bool(c) for c in checks)
    assert 0.28 <= ts_argmin <= 0.34


def test_reference_time_scale_is_the_curve_minimum(fig5_table):
    # characterization: the quoted 3.696 is the minimum of the curve
    ts = fig5_table[:, 1]
    imin = int(np.argmin(ts))
    assert abs(ts[imin] - 3.696) <= 0.01
    assert 0.29 <= fig5_table[imin, 0] <= 0.33


def test_reference_pulse_area_is_the_curve_minimum(fig5_table):
    # characterization: the quoted 1.907 pi is the minimum of the area curve,
    # attained near gamma0 = 0.39 pi rather than at 0.3 pi
    area = fig5_table[:, 2]
    imin = int(np.argmin(area))
    assert abs(area[imin] - 1.907) <= 0.01
    assert 0.36 <= fig5_table[imin, 0] <= 0.42


def test_criterion_4_adiabatic_reference():
    gamma0, tau1 = 0.01 * PI, 0.12
    ref = adiabatic_reference(gamma0, tau1, 0.5 * PI)
    # independent route: quadrature of the flat-gamma drive envelope over a
    # window wide enough to capture the whole ramp
    t = np.linspace(-2.0, 2.0, 40001)
    theta_dot = 0.5 * PI * expit(t / tau1) * expit(-t / tau1) / tau1
    env = 2.0 * theta_dot / np.tan(gamma0)
    area_num = float(simpson(env, x=t))
    max_num = float(env.max())
    ok = (
        63 * PI <= ref.time_scale <= 67 * PI
        and ref.area >= 10 * PI
        and abs(ref.area - area_num) <= 0.01 * area_num
        and abs(ref.omega0_max - max_num) <= 0.01 * max_num
    )
    _line(
        "4",
        ok,
        f"T*Omega0_max={ref.time_scale / PI:.2f}pi in [63,67]pi, area={ref.area / PI:.2f}pi>=10pi, "
        f"closed-vs-numeric rel diff {abs(ref.area - area_num) / area_num:.2e}",
    )
    assert 63 * PI <= ref.time_scale <= 67 * PI
    assert ref.area == pytest.approx(PI / np.tan(gamma0), rel=1e-12)
    assert ref.area >= 10 * PI
    assert abs(ref.area - area_num) <= 0.01 * area_num
    assert abs(ref.omega0_max - max_num) <= 0.01 * max_num


def test_criterion_5_path_tracking_over_random_draws():
    worst = -np.inf
    for params in draw_schedule_params(seed=42, n=50):
        traj = evolve(params, steps=4000)
        fid = path_fidelity(traj, params)
        worst = max(worst, float((1.0 - fid.p_d).max()))
        assert (1.0 - fid.p_d).max() <= 5e-3
    _line("5", True, f"50 draws, worst max(1-P_d)={worst:.2e} <= 5e-3")


def test_criterion_6_decoupling_oracle():
    worst_residual = 0.0
    worst_polar = 0.0
    interior = np.linspace(-0.5, 0.5, 103)[1:-1]
    for params in draw_schedule_params(seed=7, n=20):
        grid = np.linspace(params.t_initial, params.t_final, 501)
        env = envelope(params, grid)
        c = synthesize(params, grid)
        peak = float(np.asarray(env.omega0).max())
        # polar and cartesian forms must agree pointwise
        dp = np.abs(c.omega_p - env.omega0 * np.sin(env.theta_tilde)).max()
        ds = np.abs(c.omega_s - env.omega0 * np.cos(env.theta_tilde)).max()
        worst_polar = max(worst_polar, dp / peak, ds / peak)
        assert max(dp, ds) <= 1e-12 * max(1.0, peak)
        for t in interior * params.T:
            r = decoupling_residual(params, t)
            rel = max(abs(r.r1), abs(r.r2)) / peak
            worst_residual = max(worst_residual, rel)
            assert rel <= 1e-9
    _line(
        "6",
        True,
        f"20 draws x 101 times: max |residual|/Omega0_max={worst_residual:.2e} <= 1e-9, "
        f"polar-vs-cartesian max rel diff {worst_polar:.2e}",
    )


def test_criterion_7_master_equation_sanity():
    diag = []
    for eta in (0.15, 0.3):
        res = evolve_density(DEFAULTS, eta, steps=2000)
        diag.append((res.max_trace_drift, res.max_hermiticity_defect, res.min_eigenvalue))
        assert res.max_trace_drift <= 1e-9
        assert res.max_hermiticity_defect <= 1e-10
        assert res.min_eigenvalue >= -1e-9
    pure = evolve(DEFAULTS, steps=2000).states[-1]
    res0 = evolve_density(DEFAULTS, 0.0, steps=2000)
    gap = float(np.abs(res0.rho - np.outer(pure, pure.conj())).max())
    assert gap <= 1e-8
    _line(
        "7",
        True,
        f"trace drift<= {max(d[0] for d in diag):.1e}, hermiticity<= {max(d[1] for d in diag):.1e}, "
        f"min eig>= {min(d[2] for d in diag):.1e}, eta=0 gap {gap:.1e}",
    )


def test_criterion_8_systematic_sweep_peak_at_zero(default_lambda_sweep):
    # Asserted exactly as stated: the lambda = 0 point must be the grid
    # maximum of the sweep.  The coarse three-point sweep satisfies it; the
    # default 41-point grid does not, because the physical |g> start is off
    # the designed path by the window-truncation residual (~1.4e-3 in
    # probability at these widths) and a small negative lambda partially
    # compensates, lifting P_e above its lambda = 0 value.
    coarse = systematic_sweep(DEFAULTS, [-0.1, 0.0, 0.1], steps=2000)
    assert int(np.argmax(coarse.final_populations)) == 1
    sweep = default_lambda_sweep
    idx_zero = int(np.where(sweep.axis_values == 0.0)[0][0])
    idx_max = int(np.argmax(sweep.final_populations))
    ok = idx_max == idx_zero
    _line(
        "8 (peak at zero)",
        ok,
        f"41-point grid argmax at lambda={sweep.axis_values[idx_max]:+.3f} "
        f"(P_e={sweep.final_populations[idx_max]:.6f} vs {sweep.final_populations[idx_zero]:.6f} at 0)",
    )
    assert ok, (
        f"grid maximum sits at lambda={sweep.axis_values[idx_max]:+.3f}, not 0: "
        f"P_e={sweep.final_populations[idx_max]:.6f} vs P_e(0)={sweep.final_populations[idx_zero]:.6f}; "
        "boundary truncation moves the true peak slightly negative "
        "(see README, Known reference-value deviations)"
    )


def test_systematic_peak_shift_quantified(default_lambda_sweep):
    # characterization of the deviation above: at the loosest widths the
    # sweep peak sits near lambda = -0.03 with a ~1.6e-3 advantage over 0
    sweep = default_lambda_sweep
    idx_zero = int(np.where(sweep.axis_values == 0.0)[0][0])
    idx_max = int(np.argmax(sweep.final_populations))
    assert -0.05 <= sweep.axis_values[idx_max] <= -0.01
    gain = sweep.final_populations[idx_max] - sweep.final_populations[idx_zero]
    assert 5e-4 <= gain <= 5e-3


def test_criterion_8_phase_ordering():
    quarter = ScheduleParams(tau1=0.12, tau2=0.3, gamma0=0.15 * PI, phi=0.25 * PI)
    p_half = systematic_evolve(DEFAULTS, 0.1, steps=2000)
    p_quarter = systematic_evolve(quarter, 0.1, steps=2000)
    ok = p_half >= p_quarter
    _line("8 (phase ordering)", ok, f"lambda=0.1: P_e(phi=pi/2)={p_half:.5f} >= P_e(phi=pi/4)={p_quarter:.5f}")
    assert ok


def test_criterion_8_amplitude_noise_monotone():
    grid = np.linspace(0.0, 0.3, 31)
    pes = np.array([evolve_density(DEFAULTS, eta, steps=1500).p_e for eta in grid])
    ok = bool(np.all(np.diff(pes) <= 1e-12))
    _line("8 (noise monotone)", ok, f"P_e falls {pes[0]:.4f} -> {pes[-1]:.4f} over eta in [0, 0.3]")
    assert ok


def test_criterion_8_amplitude_parameter_orderings():
    eta = 0.2
    reference = evolve_density(DEFAULTS, eta, steps=1500).p_e
    lowered = {
        "tau1": ScheduleParams(tau1=0.09, tau2=0.3, gamma0=0.15 * PI, phi=0.5 * PI),
        "tau2": ScheduleParams(tau1=0.12, tau2=0.2, gamma0=0.15 * PI, phi=0.5 * PI),
        "gamma0": ScheduleParams(tau1=0.12, tau2=0.3, gamma0=0.05 * PI, phi=0.5 * PI),
        "phi": ScheduleParams(tau1=0.12, tau2=0.3, gamma0=0.15 * PI, phi=0.25 * PI),
    }
    results = {name: evolve_density(p, eta, steps=1500).p_e for name, p in lowered.items()}
    ok = all(reference >= val for val in results.values())
    _line(
        "8 (parameter orderings)",
        ok,
        "raising each of tau1, tau2, gamma0, phi does not worsen P_e at eta=0.2: "
        + ", ".join(f"{k}: {v:.4f}->{reference:.4f}" for k, v in results.items()),
    )
    for name, val in results.items():
        assert reference >= val, f"raising {name} worsened P_e: {val} -> {reference}"


def test_criterion_9_numerical_hygiene(tmp_path):
    traj_a = evolve(FIG3, steps=4000)
    traj_b = evolve(FIG3, steps=8000)
    pure_gap = float(np.abs(traj_a.populations[-1] - traj_b.populations[-1]).max())
    sys_gap = abs(
        systematic_evolve(DEFAULTS, 0.1, steps=4000) - systematic_evolve(DEFAULTS, 0.1, steps=8000)
    )
    den_gap = abs(
        evolve_density(DEFAULTS, 0.2, steps=2000).p_e - evolve_density(DEFAULTS, 0.2, steps=4000).p_e
    )
    assert pure_gap <= 1e-8
    assert sys_gap <= 1e-8
    assert den_gap <= 1e-8
    assert traj_a.norm_drift <= 1e-8

    base = dict(steps=1000, lambda_count=5, eta_count=3, eta_max=0.2)
    cfg_a = RunConfig(output_dir=str(tmp_path / "a"), **base)
    cfg_b = RunConfig(output_dir=str(tmp_path / "b"), **base)
    cfg_c = RunConfig(output_dir=str(tmp_path / "c"), **base)
    for cfg, workers in ((cfg_a, 1), (cfg_b, 2), (cfg_c, 1)):
        assert cli.run("sweep-systematic", cfg, workers=workers) == 0
        assert cli.run("sweep-amplitude", cfg, workers=workers) == 0
    for name in ("fig6.csv", "fig7.csv"):
        bytes_a = (tmp_path / "a" / name).read_bytes()
        assert bytes_a == (tmp_path / "b" / name).read_bytes()  # worker count
        assert bytes_a == (tmp_path / "c" / name).read_bytes()  # rerun
    _line(
        "9",
        True,
        f"grid-doubling gaps: pure {pure_gap:.1e}, systematic {sys_gap:.1e}, density {den_gap:.1e}; "
        f"norm drift {traj_a.norm_drift:.1e}; sweep CSVs byte-identical across workers and reruns",
    )
