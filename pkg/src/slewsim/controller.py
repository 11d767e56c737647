"""Sliding surface, finite-time control law, torque saturation, and the
per-cycle command pipeline tying the error geometry and rate shaping together."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attmath import InvalidArgumentError, Quaternion, Vec3, cross, qinv, qmul, to_rotation
from .errgeo import SINGULARITY_GUARD, eigen_axis_angle, eigen_axis_rate, error_angle_rate
from .plant import DEG, SatelliteParams
from .rateprofile import (
    DEFAULT_FD_STEP,
    ProfileKind,
    alpha_r,
    alpha_r_dot,
    build_profile,
    feedforward_norm,
    omega_r_max,
    omega_r_max_dot,
    omega_r_vec_dot,
    segment_of,
    sigma,
)


class ControllerFaultError(RuntimeError):
    """A non-finite intermediate appeared in the control pipeline."""


@dataclass
class ControlParams:
    """Gains, profile shape parameters, and numeric guards for the command pipeline."""

    d_max: float = 2.0                      # N*m, robustness gain against disturbance
    gamma: float = 0.99                     # deceleration ratio in (0, 1]
    eta: float = 0.05 * DEG                 # rad, acceleration blend threshold
    beta1: float = 2.0                      # sliding gain, > 0
    beta2: float = 0.5                      # sliding exponent, in (0, 1)
    tau1: float = 1.0                       # s, acceleration ramp-up duration
    tau3: float = 1.0                       # s, acceleration ramp-down duration
    fd_step: float = DEFAULT_FD_STEP        # finite-difference step for the profile partials
    s_guard: float = 1e-9                   # rad/s, zero branch of the unit sliding vector
    singularity_guard: float = SINGULARITY_GUARD
    profile_kind: ProfileKind = ProfileKind.MODIFIED

    def __post_init__(self) -> None:
        if self.beta1 <= 0.0:
            raise InvalidArgumentError(f"beta1 must be positive, got {self.beta1}")
        if not 0.0 < self.beta2 < 1.0:
            raise InvalidArgumentError(f"beta2 must be in (0, 1), got {self.beta2}")
        if self.tau1 <= 0.0 or self.tau3 <= 0.0:
            raise InvalidArgumentError("tau1 and tau3 must be positive")
        if not 0.0 < self.gamma <= 1.0:
            raise InvalidArgumentError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.eta <= 0.0 or self.fd_step <= 0.0 or self.s_guard <= 0.0:
            raise InvalidArgumentError("eta, fd_step and s_guard must be positive")
        if self.d_max < 0.0:
            raise InvalidArgumentError(f"d_max must be non-negative, got {self.d_max}")


@dataclass
class PrevCycle:
    """State carried between control cycles: the last feed-forward torque norm
    used for the backward difference in the regulating-acceleration derivative."""

    feedforward_norm: float | None = None


@dataclass
class ControlOutput:
    """One control cycle's command and diagnostics."""

    u_cmd: Vec3
    u_raw: Vec3
    s: Vec3
    omega_r: float = 0.0
    alpha_r: float = 0.0
    omega_r_max: float = 0.0
    theta_e: float = 0.0
    omega_e: Vec3 = field(default_factory=lambda: np.zeros(3))
    singular: bool = False
    saturated: bool = False
    budget_exhausted: bool = False
    rate_limit_degenerate: bool = False
    v_dot_margin: float = 0.0
    segment: int = 3


def sliding_surface(omega_d_in_b: Vec3, omega_r_vec: Vec3, omega_b: Vec3) -> Vec3:
    """s = omega_D + omega_R - omega_B, all in body-frame components."""
    return (
        np.asarray(omega_d_in_b, dtype=float)
        + np.asarray(omega_r_vec, dtype=float)
        - np.asarray(omega_b, dtype=float)
    )


def control_law(
    s: Vec3,
    omega_d_dot_in_b: Vec3,
    omega_r_dot: Vec3,
    omega_b: Vec3,
    params: ControlParams,
    satellite: SatelliteParams,
) -> tuple[Vec3, Vec3, bool, float]:
    """Raw and saturated torque command plus the sampled Lyapunov margin.

    Returns (u_cmd, u_raw, saturated, v_dot_margin). The margin is
    s' J s_dot + beta1 lambda_min ||s||^(1+beta2) evaluated for the applied
    (possibly saturated) command with the disturbance at zero; non-positive
    while unsaturated.
    """
    inertia = satellite.inertia
    n_s = float(np.linalg.norm(s))
    s_hat = s / n_s if n_s > params.s_guard else np.zeros(3)
    gyro = cross(omega_b, inertia @ omega_b)
    u_raw = (
        inertia @ (omega_d_dot_in_b + omega_r_dot + params.beta1 * n_s**params.beta2 * s_hat)
        + params.d_max * s_hat
        + gyro
    )
    if not np.all(np.isfinite(u_raw)):
        raise ControllerFaultError(f"non-finite raw torque: u={u_raw}, s={s}")
    n_u = float(np.linalg.norm(u_raw))
    saturated = n_u > satellite.u_max
    u_cmd = u_raw
    if saturated:
        # repeat the rescale if rounding leaves the norm an ulp above the limit
        for _ in range(4):
            u_cmd = satellite.u_max / float(np.linalg.norm(u_cmd)) * u_cmd
            if float(np.linalg.norm(u_cmd)) <= satellite.u_max:
                break
    # s' J s_dot with J s_dot = J (wD_dot + wR_dot) - u_cmd + gyro (d = 0).
    j_s_dot = inertia @ (omega_d_dot_in_b + omega_r_dot) - u_cmd + gyro
    v_dot = float(s @ j_s_dot)
    margin = v_dot + params.beta1 * satellite.lambda_min * n_s ** (1.0 + params.beta2)
    return u_cmd, u_raw, saturated, margin


def compute_command(
    q_b: Quaternion,
    omega_b: Vec3,
    q_d: Quaternion,
    omega_d_in_d: Vec3,
    omega_d_dot_in_d: Vec3,
    params: ControlParams,
    satellite: SatelliteParams,
    prev: PrevCycle,
    control_period: float,
) -> tuple[ControlOutput, PrevCycle]:
    """Full torque-command pipeline for one control cycle.

    Pure function of its arguments; the returned PrevCycle feeds the next call.
    """
    inertia = satellite.inertia
    omega_b = np.asarray(omega_b, dtype=float)
    q_e = qmul(q_d, qinv(q_b)).canonicalized()
    t_bd = to_rotation(q_e).T
    omega_d_b = t_bd @ np.asarray(omega_d_in_d, dtype=float)
    omega_d_dot_b = t_bd @ np.asarray(omega_d_dot_in_d, dtype=float)
    omega_e = omega_d_b - omega_b

    axis, theta_e, singular = eigen_axis_angle(q_e, params.singularity_guard)

    ff = feedforward_norm(inertia, omega_d_dot_b, omega_b)
    budget = satellite.u_max - ff
    exhausted = budget <= 0.0
    floor = 0.1 * params.gamma * satellite.u_max / satellite.sigma_top
    if exhausted:
        a_max = a_min = floor
    else:
        a_min = params.gamma * budget / satellite.sigma_top
        if singular:
            a_max = a_min
        else:
            a_max = params.gamma * budget / float(np.linalg.norm(inertia @ axis))

    s_val = sigma(theta_e, params.eta)
    a_r = alpha_r(theta_e, params.eta, a_min, a_max)
    w_r_max = omega_r_max(omega_d_b, axis, satellite.omega_max)

    ff_dot = (ff - prev.feedforward_norm) / control_period if prev.feedforward_norm is not None else 0.0

    if singular:
        omega_r_vec = np.zeros(3)
        omega_r_dot = np.zeros(3)
        w_r = 0.0
        degenerate = False
        segment = 0
    else:
        theta_dot = error_angle_rate(omega_e, axis)
        axis_dot = eigen_axis_rate(omega_e, axis, q_e, params.singularity_guard)
        w_r_max_dot, degenerate = omega_r_max_dot(
            omega_d_b, omega_d_dot_b, axis, axis_dot, satellite.omega_max
        )
        a_r_dot = alpha_r_dot(
            theta_dot, params.eta, a_max, a_min, s_val, axis, axis_dot, inertia, params.gamma, ff_dot
        )
        profile = build_profile(a_r, params.tau1, params.tau3, w_r_max, params.profile_kind)
        segment = segment_of(profile, theta_e)
        omega_r_dot, w_r = omega_r_vec_dot(
            a_r,
            params.tau1,
            params.tau3,
            w_r_max,
            params.profile_kind,
            theta_e,
            axis,
            axis_dot,
            theta_dot,
            a_r_dot,
            w_r_max_dot,
            params.fd_step,
            profile,
        )
        omega_r_vec = w_r * axis

    s = sliding_surface(omega_d_b, omega_r_vec, omega_b)
    u_cmd, u_raw, saturated, margin = control_law(
        s, omega_d_dot_b, omega_r_dot, omega_b, params, satellite
    )
    out = ControlOutput(
        u_cmd=u_cmd,
        u_raw=u_raw,
        s=s,
        omega_r=w_r,
        alpha_r=a_r,
        omega_r_max=w_r_max,
        theta_e=theta_e,
        omega_e=omega_e,
        singular=singular,
        saturated=saturated,
        budget_exhausted=exhausted,
        rate_limit_degenerate=degenerate,
        v_dot_margin=margin,
        segment=segment,
    )
    return out, PrevCycle(feedforward_norm=ff)


__all__ = [
    "ControlParams",
    "ControlOutput",
    "ControllerFaultError",
    "PrevCycle",
    "compute_command",
    "control_law",
    "sliding_surface",
]
