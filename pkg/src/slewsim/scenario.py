"""Scenario definitions, desired-frame generators, the simulation loop,
convergence detection, and slew-time sweeps."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .attmath import InvalidArgumentError, Quaternion, Vec3, vec3
from .controller import ControlParams, PrevCycle, compute_command
from .plant import DEG, BodyState, DisturbanceModel, SatelliteParams, rk4_step
from .rateprofile import InfeasibleCommandError, ProfileKind
from .simcli import TelemetryRecord

EARTH_RADIUS_KM = 6378.137
EARTH_MU_KM3_S2 = 398600.4418


class ScenarioDefinitionError(ValueError):
    """The scenario geometry or parameters are inconsistent."""


class ScenarioKind(enum.Enum):
    REST_TO_REST = "rest_to_rest"
    TRACK = "track"


@dataclass
class DesiredSample:
    """Desired frame at one control instant; rates in desired-frame components."""

    q_d: Quaternion
    omega_d_in_d: Vec3
    omega_d_dot_in_d: Vec3
    t: float


@dataclass
class Scenario:
    """One simulation case: initial state, desired-frame source, and run settings."""

    kind: ScenarioKind
    initial: BodyState
    profile_kind: ProfileKind = ProfileKind.MODIFIED
    control_freq: float = 100.0            # Hz
    duration: float = 120.0                # s
    theta_tol: float = 0.01 * DEG          # rad
    omega_tol: float = 0.01 * DEG          # rad/s
    disturbance_on: bool = True
    fixed_q_d: Quaternion | None = None    # rest-to-rest target attitude
    samples: list[DesiredSample] = field(default_factory=list)  # tracking stream

    def __post_init__(self) -> None:
        if self.duration <= 0.0:
            raise ScenarioDefinitionError(f"duration must be positive, got {self.duration}")
        if self.theta_tol <= 0.0 or self.omega_tol <= 0.0:
            raise ScenarioDefinitionError("convergence thresholds must be positive")
        if self.control_freq <= 0.0:
            raise ScenarioDefinitionError("control frequency must be positive")

    def desired_at(self, cycle: int) -> DesiredSample:
        if self.kind is ScenarioKind.REST_TO_REST:
            return DesiredSample(self.fixed_q_d, np.zeros(3), np.zeros(3), cycle / self.control_freq)
        if cycle >= len(self.samples):
            raise ScenarioDefinitionError(
                f"desired-frame stream exhausted at cycle {cycle} (have {len(self.samples)} samples)"
            )
        return self.samples[cycle]


def rest_to_rest(
    axis: Vec3,
    angle: float,
    profile_kind: ProfileKind = ProfileKind.MODIFIED,
    control_freq: float = 100.0,
    duration: float = 120.0,
    disturbance_on: bool = True,
) -> Scenario:
    """Reorientation by `angle` about a fixed inertial axis, starting and ending at rest."""
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        raise ScenarioDefinitionError("rotation axis must be nonzero")
    if not 0.0 <= angle <= np.pi:
        raise ScenarioDefinitionError(f"angle must be in [0, pi], got {angle}")
    return Scenario(
        kind=ScenarioKind.REST_TO_REST,
        initial=BodyState.at_rest(),
        profile_kind=profile_kind,
        control_freq=control_freq,
        duration=duration,
        disturbance_on=disturbance_on,
        fixed_q_d=Quaternion.from_axis_angle(axis / n, angle),
    )


def _quat_from_matrix(t: np.ndarray) -> Quaternion:
    """Unit quaternion for a frame rotation matrix (largest-pivot extraction)."""
    tr = t[0, 0] + t[1, 1] + t[2, 2]
    if tr > 0.0:
        w = 0.5 * np.sqrt(1.0 + tr)
        f = 0.25 / w
        v = f * np.array([t[1, 2] - t[2, 1], t[2, 0] - t[0, 2], t[0, 1] - t[1, 0]])
        return Quaternion(v, w).normalized()
    i = int(np.argmax([t[0, 0], t[1, 1], t[2, 2]]))
    j, k = (i + 1) % 3, (i + 2) % 3
    vi = 0.5 * np.sqrt(max(1.0 + t[i, i] - t[j, j] - t[k, k], 0.0))
    f = 0.25 / vi
    v = np.zeros(3)
    v[i] = vi
    v[j] = f * (t[i, j] + t[j, i])
    v[k] = f * (t[i, k] + t[k, i])
    w = f * (t[j, k] - t[k, j])
    return Quaternion(v, w).normalized()


def _raw_qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Quaternion product on raw 4-arrays, no unit checks (for derivative algebra)."""
    pv, pw = p[:3], p[3]
    qv, qw = q[:3], q[3]
    v = pw * qv + qw * pv - np.cross(pv, qv)
    return np.concatenate([v, [pw * qw - pv @ qv]])


def target_staring_generator(
    duration: float,
    control_freq: float,
    altitude_km: float = 500.0,
    cross_track_km: float = 0.0,
) -> list[DesiredSample]:
    """Desired-frame stream pointing the body z-axis boresight at a fixed ground target.

    Circular equatorial orbit over a spherical, non-rotating Earth; the target
    sits on the surface at the sub-satellite point of mid-pass, optionally
    offset cross-track. The frame's x-axis tracks the projected velocity
    (yaw fix). Rates come from 5-point central differences of the attitude
    stream at the control period.
    """
    if altitude_km <= 0.0:
        raise ScenarioDefinitionError("altitude must be positive")
    r_orb = EARTH_RADIUS_KM + altitude_km
    rate = np.sqrt(EARTH_MU_KM3_S2 / r_orb**3)
    lat = cross_track_km / EARTH_RADIUS_KM
    target = EARTH_RADIUS_KM * vec3(np.cos(lat), 0.0, np.sin(lat))
    period = 1.0 / control_freq
    n_cycles = int(round(duration * control_freq)) + 1
    pad = 4  # extra samples each side for the two difference stencils
    t_mid = 0.5 * duration

    q_arr = np.zeros((n_cycles + 2 * pad, 4))
    prev = None
    for idx in range(n_cycles + 2 * pad):
        t = (idx - pad) * period
        u = rate * (t - t_mid)
        r_sat = r_orb * vec3(np.cos(u), np.sin(u), 0.0)
        if r_sat @ target < EARTH_RADIUS_KM**2:
            raise ScenarioDefinitionError(f"target below horizon at t = {t:.1f} s")
        v_sat = r_orb * rate * vec3(-np.sin(u), np.cos(u), 0.0)
        z_axis = target - r_sat
        z_axis /= np.linalg.norm(z_axis)
        x_axis = v_sat - (v_sat @ z_axis) * z_axis
        x_axis /= np.linalg.norm(x_axis)
        y_axis = np.cross(z_axis, x_axis)
        q = _quat_from_matrix(np.vstack([x_axis, y_axis, z_axis])).as_array()
        if prev is not None and q @ prev < 0.0:
            q = -q
        q_arr[idx] = q
        prev = q

    # 5-point central differences: first the quaternion stream -> omega, then
    # the omega stream -> omega_dot.
    def stencil(arr: np.ndarray, idx: int) -> np.ndarray:
        return (-arr[idx + 2] + 8.0 * arr[idx + 1] - 8.0 * arr[idx - 1] + arr[idx - 2]) / (12.0 * period)

    w_arr = np.zeros((n_cycles + 2 * pad, 3))
    for idx in range(2, n_cycles + 2 * pad - 2):
        q = q_arr[idx]
        q_dot = stencil(q_arr, idx)
        q_inv = np.concatenate([-q[:3], [q[3]]])
        w_arr[idx] = 2.0 * _raw_qmul(q_dot, q_inv)[:3]

    samples: list[DesiredSample] = []
    for k in range(n_cycles):
        idx = k + pad
        samples.append(
            DesiredSample(
                q_d=Quaternion(q_arr[idx, :3], q_arr[idx, 3]),
                omega_d_in_d=w_arr[idx],
                omega_d_dot_in_d=stencil(w_arr, idx),
                t=k * period,
            )
        )
    return samples


def tracking_scenario(
    duration: float = 150.0,
    control_freq: float = 100.0,
    profile_kind: ProfileKind = ProfileKind.MODIFIED,
    altitude_km: float = 500.0,
    initial_offset_axis: Vec3 | None = None,
    initial_offset_angle: float = 10.0 * DEG,
    disturbance_on: bool = True,
) -> Scenario:
    """Target-staring pass with the body starting at rest, offset from the stream start."""
    samples = target_staring_generator(duration + 2.0, control_freq, altitude_km)
    axis = np.asarray(initial_offset_axis if initial_offset_axis is not None else vec3(1.0, 0.0, 0.0))
    from .attmath import qmul  # local to keep module imports minimal

    q_b0 = qmul(Quaternion.from_axis_angle(axis, initial_offset_angle), samples[0].q_d)
    return Scenario(
        kind=ScenarioKind.TRACK,
        initial=BodyState(q_b0, np.zeros(3), 0.0),
        profile_kind=profile_kind,
        control_freq=control_freq,
        duration=duration,
        disturbance_on=disturbance_on,
        samples=samples,
    )


def euler_321(q: Quaternion) -> tuple[float, float, float]:
    """Yaw-pitch-roll (3-2-1) angles of the frame carried by q, in radians."""
    from .attmath import to_rotation

    t = to_rotation(q)
    yaw = float(np.arctan2(t[0, 1], t[0, 0]))
    pitch = float(np.arcsin(np.clip(-t[0, 2], -1.0, 1.0)))
    roll = float(np.arctan2(t[1, 2], t[2, 2]))
    return yaw, pitch, roll


def simulate(
    scenario: Scenario,
    satellite: SatelliteParams,
    params: ControlParams,
    dt: float = 0.01,
) -> list[TelemetryRecord]:
    """Run one scenario: sample-and-hold control at the scenario's frequency,
    RK4 plant propagation at dt, one telemetry record per control cycle."""
    period = 1.0 / scenario.control_freq
    n_sub = int(round(period / dt))
    if abs(n_sub * dt - period) > 1e-9 or n_sub < 1:
        raise InvalidArgumentError(f"dt {dt} must divide the control period {period}")
    params = replace(params, profile_kind=scenario.profile_kind)
    disturbance = DisturbanceModel(enabled=scenario.disturbance_on)
    state = scenario.initial
    prev = PrevCycle()
    n_cycles = int(round(scenario.duration * scenario.control_freq))
    records: list[TelemetryRecord] = []

    for k in range(n_cycles):
        des = scenario.desired_at(k)
        w_d_norm = float(np.linalg.norm(des.omega_d_in_d))
        if w_d_norm >= satellite.omega_max:
            raise InfeasibleCommandError(
                f"desired rate {w_d_norm:.6g} rad/s >= slew limit at t = {state.t:.3f} s"
            )
        out, prev = compute_command(
            state.q_b,
            state.omega_b,
            des.q_d,
            des.omega_d_in_d,
            des.omega_d_dot_in_d,
            params,
            satellite,
            prev,
            period,
        )
        records.append(_make_record(state, des, out, scenario))
        for _ in range(n_sub):
            state = rk4_step(state, out.u_cmd, dt, satellite, disturbance)
    return records


def _make_record(
    state: BodyState,
    des: DesiredSample,
    out,
    scenario: Scenario,
) -> TelemetryRecord:
    flags = (
        (1 if out.singular else 0)
        | (2 if out.saturated else 0)
        | (4 if out.budget_exhausted else 0)
        | (8 if out.rate_limit_degenerate else 0)
    )
    yaw_b, pitch_b, roll_b = euler_321(state.q_b)
    yaw_d, pitch_d, roll_d = euler_321(des.q_d)
    u = out.u_cmd
    return TelemetryRecord(
        t=state.t,
        q_b=state.q_b.as_array(),
        omega_b=np.asarray(state.omega_b, dtype=float),
        theta_e=out.theta_e,
        omega_e_norm=float(np.linalg.norm(out.omega_e)),
        omega_b_norm=float(np.linalg.norm(state.omega_b)),
        u_cmd=np.asarray(u, dtype=float),
        u_norm=float(np.linalg.norm(u)),
        s=np.asarray(out.s, dtype=float),
        omega_r=out.omega_r,
        alpha_r=out.alpha_r,
        omega_r_max=out.omega_r_max,
        segment=out.segment,
        flags=flags,
        euler_b=vec3(yaw_b, pitch_b, roll_b),
        euler_d=vec3(yaw_d, pitch_d, roll_d),
    )


def detect_convergence(records: list[TelemetryRecord], theta_tol: float, omega_tol: float) -> float:
    """Earliest time after which the error angle and rate stay inside tolerance
    to the end of the run; inf when never."""
    if not records:
        raise InvalidArgumentError("empty telemetry stream")
    t_star = np.inf
    for rec in reversed(records):
        if rec.theta_e < theta_tol and rec.omega_e_norm < omega_tol:
            t_star = rec.t
        else:
            break
    return t_star


@dataclass
class SweepRow:
    axis_name: str
    angle_deg: float
    kind: ProfileKind
    slew_time: float        # s; inf = no convergence; nan = run failed
    error: str = ""


def slew_sweep(
    satellite: SatelliteParams,
    params: ControlParams,
    axes: dict[str, Vec3] | None = None,
    angles_deg: list[float] | None = None,
    kinds: tuple[ProfileKind, ...] = (ProfileKind.TRAPEZOID, ProfileKind.MODIFIED),
    control_freq: float = 100.0,
    margin_s: float = 30.0,
) -> list[SweepRow]:
    """Slew time for every (axis, angle, profile kind) cell; per-run failures
    become failure rows rather than aborting the sweep."""
    if axes is None:
        axes = {"x": vec3(1, 0, 0), "y": vec3(0, 1, 0), "z": vec3(0, 0, 1)}
    if angles_deg is None:
        angles_deg = [float(a) for a in range(10, 181, 10)]
    rows: list[SweepRow] = []
    for kind in kinds:
        for name, axis in axes.items():
            for angle_deg in angles_deg:
                duration = angle_deg * DEG / satellite.omega_max + margin_s
                try:
                    sc = rest_to_rest(
                        axis,
                        angle_deg * DEG,
                        profile_kind=kind,
                        control_freq=control_freq,
                        duration=duration,
                    )
                    recs = simulate(sc, satellite, params)
                    t_star = detect_convergence(recs, sc.theta_tol, sc.omega_tol)
                    rows.append(SweepRow(name, angle_deg, kind, t_star))
                except Exception as exc:  # noqa: BLE001 - failure rows, never abort
                    rows.append(SweepRow(name, angle_deg, kind, np.nan, repr(exc)))
    return rows
