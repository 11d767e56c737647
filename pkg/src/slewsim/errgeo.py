"""Error quaternion geometry: instantaneous eigen-axis, error angle and rates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attmath import Quaternion, Vec3, cross, qinv, qmul, to_rotation

# ||q_e vector part|| below this marks the eigen-axis singular (error angle ~ 2e-8 rad),
# far inside the 0.01 deg convergence band.
SINGULARITY_GUARD = 1e-8


@dataclass
class ErrorState:
    """Error geometry between the desired and body frames at one instant."""

    q_e: Quaternion
    omega_e: Vec3                      # rad/s, body frame
    axis: Vec3 = field(default_factory=lambda: np.zeros(3))
    theta_e: float = 0.0               # rad, in [0, pi]
    axis_dot: Vec3 = field(default_factory=lambda: np.zeros(3))
    theta_e_dot: float = 0.0           # rad/s
    singular: bool = False


def error_state(
    q_d: Quaternion,
    q_b: Quaternion,
    omega_d_in_d: Vec3,
    omega_b: Vec3,
) -> tuple[Quaternion, Vec3]:
    """Error quaternion q_D (x) q_B^-1 (canonicalized to w >= 0) and body-frame rate error.

    omega_d_in_d carries desired-frame components; it is rotated into the body
    frame before differencing.
    """
    q_e = qmul(q_d, qinv(q_b)).canonicalized()
    # to_rotation(q_e) maps body components to desired components; transpose goes back.
    t_bd = to_rotation(q_e).T
    omega_e = t_bd @ np.asarray(omega_d_in_d, dtype=float) - np.asarray(omega_b, dtype=float)
    return q_e, omega_e


def eigen_axis_angle(q_e: Quaternion, guard: float = SINGULARITY_GUARD) -> tuple[Vec3, float, bool]:
    """Eigen-axis, error angle and singularity flag from a canonicalized error quaternion."""
    theta_e = 2.0 * np.arccos(np.clip(q_e.w, -1.0, 1.0))
    n = np.linalg.norm(q_e.v)
    if n < guard:
        return np.zeros(3), float(theta_e), True
    return q_e.v / n, float(theta_e), False


def error_angle_rate(omega_e: Vec3, axis: Vec3) -> float:
    """Time derivative of the error angle: omega_e . axis (0 when singular)."""
    return float(np.asarray(omega_e) @ np.asarray(axis))


def eigen_axis_rate(
    omega_e: Vec3,
    axis: Vec3,
    q_e: Quaternion,
    guard: float = SINGULARITY_GUARD,
) -> Vec3:
    """Time derivative of the eigen-axis in the body frame.

    Uses the perpendicular decomposition omega_perp = omega_e - (axis.omega_e) axis.
    Returns zero when the error quaternion vector part is below the guard.
    """
    n = np.linalg.norm(q_e.v)
    if n < guard:
        return np.zeros(3)
    omega_e = np.asarray(omega_e, dtype=float)
    axis = np.asarray(axis, dtype=float)
    omega_perp = omega_e - (axis @ omega_e) * axis
    return 0.5 * ((q_e.w / n) * omega_perp + cross(omega_perp, axis))


def full_error_state(
    q_d: Quaternion,
    q_b: Quaternion,
    omega_d_in_d: Vec3,
    omega_b: Vec3,
    guard: float = SINGULARITY_GUARD,
) -> ErrorState:
    """Complete error geometry for one control cycle."""
    q_e, omega_e = error_state(q_d, q_b, omega_d_in_d, omega_b)
    axis, theta_e, singular = eigen_axis_angle(q_e, guard)
    if singular:
        return ErrorState(q_e, omega_e, np.zeros(3), theta_e, np.zeros(3), 0.0, True)
    theta_dot = error_angle_rate(omega_e, axis)
    axis_dot = eigen_axis_rate(omega_e, axis, q_e, guard)
    return ErrorState(q_e, omega_e, axis, theta_e, axis_dot, theta_dot, False)
