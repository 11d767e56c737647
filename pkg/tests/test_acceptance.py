"""End-to-end acceptance gate.

Each criterion (A1-A9) prints exactly one PASS/FAIL line; run pytest with -s
to stream the report. The heavy simulation workload is computed once, lazily,
and shared across criteria.
"""

from __future__ import annotations

import time
from functools import lru_cache

import numpy as np
import pytest

from slewsim.attmath import Quaternion, vec3
from slewsim.controller import ControlParams
from slewsim.plant import DEG, BodyState, SatelliteParams
from slewsim.rateprofile import (
    DEFAULT_FD_STEP,
    ProfileKind,
    alpha_r,
    cubic_stats,
    omega_r_partials,
    sigma,
)
from slewsim.scenario import (
    Scenario,
    ScenarioKind,
    detect_convergence,
    rest_to_rest,
    simulate,
    slew_sweep,
    tracking_scenario,
)
from slewsim.simcli import oracle_max_deviation

SAT = SatelliteParams.default()
CTL = ControlParams()

THETA_TOL = 0.01 * DEG        # rad
OMEGA_TOL = 0.01 * DEG        # rad/s
RATE_GATE = 3.0 * 1.01        # deg/s, slew limit with 1% sampling margin
TORQUE_GATE = 150.0           # N*m, exact
GAP_GATE = 0.8                # s per sweep cell
ORACLE_GATE = 1e-8            # rad/s
RESIDUAL_GATE = 1e-10         # scaled cubic residual
S_REACH_TOL = 1e-4            # rad/s
STEADY_ANGLE_GATE = 0.05      # deg


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"{name}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"{name}: {detail}"


@lru_cache(maxsize=None)
def _workload():
    """The A1-A3 simulation workload, run once with fresh cubic diagnostics."""
    cubic_stats.reset()

    a1 = {}
    for name, axis in (("x", vec3(1, 0, 0)), ("y", vec3(0, 1, 0)), ("z", vec3(0, 0, 1))):
        sc = rest_to_rest(axis, np.pi / 2, ProfileKind.MODIFIED, control_freq=100.0, duration=60.0)
        t0 = time.perf_counter()
        recs = simulate(sc, SAT, CTL)
        a1[name] = (recs, time.perf_counter() - t0, detect_convergence(recs, THETA_TOL, OMEGA_TOL))

    sweep = slew_sweep(SAT, CTL, control_freq=100.0)

    t0 = time.perf_counter()
    deviation = oracle_max_deviation(100, seed=0)
    oracle_s = time.perf_counter() - t0

    # snapshot the cubic diagnostics before any later runs add to them
    cubic_snapshot = (cubic_stats.count, cubic_stats.max_scaled_residual)
    return a1, sweep, (deviation, oracle_s), cubic_snapshot


@lru_cache(maxsize=None)
def _chatter_runs():
    """90-degree roll at the frequency/profile corners used by A6."""
    out = {}
    for freq, kind in ((100.0, ProfileKind.TRAPEZOID),
                       (10.0, ProfileKind.TRAPEZOID),
                       (10.0, ProfileKind.MODIFIED)):
        sc = rest_to_rest(vec3(1, 0, 0), np.pi / 2, kind, control_freq=freq, duration=120.0)
        recs = simulate(sc, SAT, CTL)
        tail = recs[int(0.8 * len(recs)):]
        out[(freq, kind)] = float(np.std([r.u_norm for r in tail]))
    return out


@lru_cache(maxsize=None)
def _tracking_run():
    sc = tracking_scenario(duration=150.0, control_freq=100.0, profile_kind=ProfileKind.MODIFIED)
    return sc, simulate(sc, SAT, CTL)


def test_a1_constraint_satisfaction():
    a1, _, _, _ = _workload()
    details = []
    ok = True
    for name, (recs, runtime, t_star) in a1.items():
        max_w = max(r.omega_b_norm for r in recs) / DEG
        max_u = max(r.u_norm for r in recs)
        ok &= max_w <= RATE_GATE and max_u <= TORQUE_GATE
        ok &= np.isfinite(t_star) and runtime < 5.0
        details.append(f"{name}: conv {t_star:.2f} s, max|w| {max_w:.3f} deg/s, "
                       f"max|u| {max_u:.1f} N*m, {runtime:.1f} s wall")
    _report("A1", ok, "; ".join(details))


def test_a2_profile_kind_gap():
    _, sweep, _, _ = _workload()
    ok = all(row.error == "" and np.isfinite(row.slew_time) for row in sweep)
    times = {(r.kind, r.axis_name, r.angle_deg): r.slew_time for r in sweep}
    angles = sorted({r.angle_deg for r in sweep})
    axes = sorted({r.axis_name for r in sweep})
    worst_gap = 0.0
    monotone = True
    for axis in axes:
        for kind in (ProfileKind.TRAPEZOID, ProfileKind.MODIFIED):
            col = [times[(kind, axis, a)] for a in angles]
            monotone &= all(b >= a - 1e-9 for a, b in zip(col, col[1:]))
        for a in angles:
            worst_gap = max(worst_gap, abs(times[(ProfileKind.MODIFIED, axis, a)]
                                           - times[(ProfileKind.TRAPEZOID, axis, a)]))
    ok &= worst_gap <= GAP_GATE and monotone
    _report("A2", ok, f"{len(sweep)} cells, worst kind gap {worst_gap:.3f} s "
                      f"(gate {GAP_GATE}), monotone={monotone}")


def test_a3_closed_form_vs_ode_oracle():
    _, _, (deviation, oracle_s), _ = _workload()
    ok = deviation <= ORACLE_GATE and oracle_s < 30.0
    _report("A3", ok, f"max deviation {deviation:.2e} rad/s over 100 tuples "
                      f"(gate {ORACLE_GATE:.0e}), {oracle_s:.1f} s")


def test_a4_cubic_root_health():
    _, _, _, (count, max_residual) = _workload()
    # the solver clamps every root into [0, tau3_eff], so range is structural;
    # the scaled residual is the substantive check
    ok = count > 0 and max_residual <= RESIDUAL_GATE
    _report("A4", ok, f"{count} decel-segment solves, max scaled residual "
                      f"{max_residual:.2e} (gate {RESIDUAL_GATE:.0e})")


def test_a5_finite_time_reaching():
    # isotropic test plant, no disturbance, 1 kHz control: the sampled
    # Lyapunov decrease and the analytic reaching-time bound
    sat = SatelliteParams(inertia=2.0 * np.eye(3), d_max=0.0)
    ctl = ControlParams(d_max=0.0)
    period = 1e-3
    w0 = 0.01 * vec3(1.0, 0.0, 0.0)  # rad/s
    # a small attitude error keeps the first cycle non-singular, so the
    # regulating-rate feed-forward is active (and compensated) from the start
    q0 = Quaternion.from_axis_angle(vec3(1.0, 0.0, 0.0), -1e-3)
    sc = Scenario(
        kind=ScenarioKind.REST_TO_REST,
        initial=BodyState(q0, w0, 0.0),
        profile_kind=ProfileKind.MODIFIED,
        control_freq=1.0 / period,
        duration=0.5,
        disturbance_on=False,
        fixed_q_d=Quaternion.identity(),
    )
    recs = simulate(sc, sat, ctl, dt=period)
    s_norm = np.array([np.linalg.norm(r.s) for r in recs])
    v = np.array([0.5 * r.s @ (sat.inertia @ r.s) for r in recs])
    decreasing = all(v[k + 1] < v[k] for k in range(len(v) - 1) if s_norm[k] > S_REACH_TOL)
    reached = np.nonzero(s_norm < S_REACH_TOL)[0]
    t_reach = recs[reached[0]].t if len(reached) else np.inf
    bound = (2.0 * v[0] ** ((1.0 - ctl.beta2) / 2.0)
             / (ctl.beta1 * sat.lambda_min * (1.0 - ctl.beta2)) + period)
    ok = decreasing and t_reach <= bound
    _report("A5", ok, f"V strictly decreasing={decreasing}, reach {t_reach:.4f} s "
                      f"<= bound {bound:.4f} s")


def test_a6_chattering_vs_frequency_and_profile():
    stds = _chatter_runs()
    s100_trap = stds[(100.0, ProfileKind.TRAPEZOID)]
    s10_trap = stds[(10.0, ProfileKind.TRAPEZOID)]
    s10_mod = stds[(10.0, ProfileKind.MODIFIED)]
    freq_ok = s100_trap < s10_trap
    profile_ok = s10_mod < s10_trap
    _report("A6", freq_ok and profile_ok,
            f"post-convergence std |u|: 100 Hz trap {s100_trap:.3f} < 10 Hz trap "
            f"{s10_trap:.3f} ({freq_ok}); 10 Hz mod {s10_mod:.3f} < 10 Hz trap ({profile_ok})")


def test_a7_tracking_feasibility():
    sc, recs = _tracking_run()
    peak_wd = max(np.linalg.norm(s.omega_d_in_d) for s in sc.samples) / DEG
    steady = [r.theta_e / DEG for r in recs if r.t >= 100.0]
    max_steady = max(steady)
    max_w = max(r.omega_b_norm for r in recs) / DEG
    max_u = max(r.u_norm for r in recs)
    ok = (0.5 <= peak_wd <= 1.0 and max_steady < STEADY_ANGLE_GATE
          and max_w <= RATE_GATE and max_u <= TORQUE_GATE)
    _report("A7", ok, f"peak |w_D| {peak_wd:.3f} deg/s, steady theta_e {max_steady:.2e} deg "
                      f"(gate {STEADY_ANGLE_GATE}), max|w| {max_w:.3f} deg/s, max|u| {max_u:.1f} N*m")


def test_a8_numeric_derivative_health():
    # forward-difference partials vs a central-difference oracle, away from
    # segment boundaries, plus step-halving stability and the analytic
    # blend-slope rate vs a direct central difference
    a_r, tau1, tau3, w_max = 0.2, 2.0, 3.0, 0.8
    worst_rel = 0.0
    for kind in (ProfileKind.TRAPEZOID, ProfileKind.MODIFIED):
        from slewsim.rateprofile import build_profile, eval_omega_r

        prof = build_profile(a_r, tau1, tau3, w_max, kind)
        thetas = [0.5 * prof.theta1, 0.5 * (prof.theta1 + prof.theta2),
                  0.5 * (prof.theta2 + prof.theta3)]
        for theta in thetas:
            _, d_th, d_a, d_w = omega_r_partials(a_r, tau1, tau3, w_max, kind, theta)
            h = 1e-6
            c_th = (eval_omega_r(prof, theta + h) - eval_omega_r(prof, theta - h)) / (2 * h)
            c_a = (eval_omega_r(build_profile(a_r + h, tau1, tau3, w_max, kind), theta)
                   - eval_omega_r(build_profile(a_r - h, tau1, tau3, w_max, kind), theta)) / (2 * h)
            c_w = (eval_omega_r(build_profile(a_r, tau1, tau3, w_max + h, kind), theta)
                   - eval_omega_r(build_profile(a_r, tau1, tau3, w_max - h, kind), theta)) / (2 * h)
            for fd, oracle in ((d_th, c_th), (d_a, c_a), (d_w, c_w)):
                if abs(oracle) > 1e-9:
                    worst_rel = max(worst_rel, abs(fd - oracle) / abs(oracle))
            # step halving must not move the estimates at leading order
            _, h_th, h_a, h_w = omega_r_partials(
                a_r, tau1, tau3, w_max, kind, theta, eps=DEFAULT_FD_STEP / 2.0
            )
            for full, half in ((d_th, h_th), (d_a, h_a), (d_w, h_w)):
                if abs(full) > 1e-9:
                    worst_rel = max(worst_rel, abs(half - full) / abs(full))

    # analytic regulating-acceleration rate vs central difference inside the blend
    eta, a_min, a_max = 0.05, 0.001, 0.004
    theta0, theta_dot = 0.02, 0.003
    from slewsim.rateprofile import alpha_r_dot

    analytic = alpha_r_dot(theta_dot, eta, a_max, a_min, sigma(theta0, eta),
                           vec3(1, 0, 0), np.zeros(3), SAT.inertia, CTL.gamma, 0.0)
    h = 1e-6
    central = (alpha_r(theta0 + theta_dot * h, eta, a_min, a_max)
               - alpha_r(theta0 - theta_dot * h, eta, a_min, a_max)) / (2 * h)
    worst_rel = max(worst_rel, abs(analytic - central) / abs(central))
    ok = worst_rel <= 1e-4
    _report("A8", ok, f"worst relative derivative error {worst_rel:.2e} (gate 1e-4)")


def test_a9_figure_reproduction(tmp_path):
    plotkit = pytest.importorskip("plotkit", reason="figure renderer not installed")
    from slewsim.simcli import write_telemetry

    sc = rest_to_rest(vec3(1, 0, 0), np.pi / 2, ProfileKind.MODIFIED,
                      control_freq=10.0, duration=30.0)
    recs = simulate(sc, SAT, CTL)
    csv = tmp_path / "telemetry.csv"
    write_telemetry(recs, str(csv), meta={"omega_max_deg": 3.0, "u_max": 150.0})

    sizes = {}
    for kind, inputs in (("FourPanel", [str(csv)]), ("ChatterCompare", [str(csv), str(csv)])):
        images = []
        for k in range(2):
            out = tmp_path / f"{kind}{k}.png"
            plotkit.render(plotkit.FigureSpec(kind=kind, inputs=inputs, out=str(out)))
            images.append(out.read_bytes())
        if images[0] != images[1] or not images[0]:
            _report("A9", False, f"{kind} renders differ across invocations")
        sizes[kind] = len(images[0])
    _report("A9", True, "repeated renders byte-identical: "
            + ", ".join(f"{k} {n} bytes" for k, n in sizes.items()))
