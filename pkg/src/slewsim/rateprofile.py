"""Regulating-rate shaping.

Everything that turns the instantaneous error geometry into a commanded
closing rate: acceleration limits, the slew-rate-limited maximum rate, the
trapezoidal / collapsed / modified rate profiles with their closed-form
angle-to-rate inversion, and the numeric partial derivatives feeding the
regulating-rate time derivative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .attmath import InvalidArgumentError, Vec3, cross

DEFAULT_FD_STEP = 1e-7


class InfeasibleCommandError(RuntimeError):
    """Desired-frame rate at or above the slew-rate limit; no feasible regulating rate."""


class ProfileKind(enum.Enum):
    TRAPEZOID = "trapezoid"
    COLLAPSED = "collapsed"
    MODIFIED = "modified"


class CubicStats:
    """Collects residual diagnostics from every decel-segment cubic solve.

    Reset before a run and inspect afterwards; the solver is otherwise pure.
    """

    def __init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self.count = 0
        self.max_scaled_residual = 0.0
        self.clamped = 0

    def record(self, p: float, q: float, tau: float, clamped: bool) -> None:
        residual = abs(tau**3 + p * tau + q)
        scale = max(1.0, abs(p) ** 1.5, abs(q))
        self.count += 1
        self.max_scaled_residual = max(self.max_scaled_residual, residual / scale)
        if clamped:
            self.clamped += 1


cubic_stats = CubicStats()


def sigma(x: float, eta: float) -> float:
    """Linear saturation: x/eta below eta, 1 at and above."""
    if x < 0.0:
        raise InvalidArgumentError(f"sigma argument must be non-negative, got {x}")
    if eta <= 0.0:
        raise InvalidArgumentError(f"sigma threshold must be positive, got {eta}")
    return x / eta if x < eta else 1.0


def feedforward_norm(inertia: np.ndarray, omega_d_dot_in_b: Vec3, omega_b: Vec3) -> float:
    """Torque budget consumed by feed-forward: ||J wdot_D|| + ||w x J w||."""
    gyro = cross(omega_b, inertia @ omega_b)
    return float(np.linalg.norm(inertia @ omega_d_dot_in_b) + np.linalg.norm(gyro))


def alpha_max(
    axis: Vec3,
    inertia: np.ndarray,
    u_max: float,
    omega_d_dot_in_b: Vec3,
    omega_b: Vec3,
    gamma: float,
) -> tuple[float, bool]:
    """Maximum angular acceleration achievable along the eigen-axis.

    Returns (alpha, budget_exhausted). When the feed-forward demand eats the
    whole torque budget the value is floored at zero and the flag raised; the
    caller applies its own fallback.
    """
    budget = u_max - feedforward_norm(inertia, omega_d_dot_in_b, omega_b)
    scale = np.linalg.norm(inertia @ axis)
    if budget <= 0.0:
        return 0.0, True
    return gamma * budget / scale, False


def alpha_min(
    inertia: np.ndarray,
    u_max: float,
    omega_d_dot_in_b: Vec3,
    omega_b: Vec3,
    gamma: float,
) -> tuple[float, bool]:
    """Minimum of alpha_max over all axes: gamma * budget / sigma_max(J)."""
    budget = u_max - feedforward_norm(inertia, omega_d_dot_in_b, omega_b)
    if budget <= 0.0:
        return 0.0, True
    return gamma * budget / inertia_top_singular_value(inertia), False


def inertia_top_singular_value(inertia: np.ndarray) -> float:
    """Largest singular value of the inertia matrix (constant per run; cache upstream)."""
    return float(np.linalg.svd(np.asarray(inertia, dtype=float), compute_uv=False)[0])


def alpha_r(theta_e: float, eta: float, a_min: float, a_max: float) -> float:
    """Regulating acceleration: blend from a_min at zero error angle up to a_max."""
    s = sigma(theta_e, eta)
    return (1.0 - s) * a_min + s * a_max


def omega_r_max(omega_d_in_b: Vec3, axis: Vec3, w_max: float) -> float:
    """Largest regulating rate keeping ||omega_D + omega_R axis|| at the slew limit."""
    omega_d_in_b = np.asarray(omega_d_in_b, dtype=float)
    wd2 = float(omega_d_in_b @ omega_d_in_b)
    if wd2 >= w_max * w_max:
        raise InfeasibleCommandError(
            f"desired-frame rate {np.sqrt(wd2):.6g} rad/s >= slew limit {w_max:.6g} rad/s"
        )
    wde = float(omega_d_in_b @ axis)
    return -wde + float(np.sqrt(wde * wde + w_max * w_max - wd2))


def omega_r_max_dot(
    omega_d_in_b: Vec3,
    omega_d_dot_in_b: Vec3,
    axis: Vec3,
    axis_dot: Vec3,
    w_max: float,
) -> tuple[float, bool]:
    """Time derivative of omega_r_max; (value, degenerate-discriminant flag)."""
    omega_d_in_b = np.asarray(omega_d_in_b, dtype=float)
    omega_d_dot_in_b = np.asarray(omega_d_dot_in_b, dtype=float)
    wde = float(omega_d_in_b @ axis)
    disc = wde * wde + w_max * w_max - float(omega_d_in_b @ omega_d_in_b)
    if disc <= 0.0:
        return 0.0, True
    wde_dot = float(omega_d_dot_in_b @ axis + omega_d_in_b @ np.asarray(axis_dot, dtype=float))
    return -wde_dot + (wde * wde_dot - float(omega_d_dot_in_b @ omega_d_in_b)) / np.sqrt(disc), False


@dataclass(frozen=True)
class RateProfile:
    """Precomputed piecewise rate profile omega_R(theta_e).

    Segment boundaries are stored in the effective (possibly rescaled)
    acceleration; theta3 is +inf for the collapsed shape, whose plateau starts
    at theta2.
    """

    kind: ProfileKind
    alpha_eff: float
    tau1_eff: float
    tau3_eff: float
    tau2: float
    omega1: float
    omega2: float
    theta1: float
    theta2: float
    theta3: float
    omega_r_max: float

    @property
    def duration(self) -> float:
        """Total traversal time of the shaped segments (finite-time property)."""
        return self.tau1_eff + max(self.tau2, 0.0) + self.tau3_eff

    @property
    def plateau_angle(self) -> float:
        """Error angle above which the profile returns omega_r_max."""
        return self.theta2 if self.kind is ProfileKind.COLLAPSED else self.theta3


def build_profile(
    a_r: float,
    tau1: float,
    tau3: float,
    w_r_max: float,
    kind: ProfileKind,
) -> RateProfile:
    """Construct the segment boundaries for one (alpha_R, omega_R_max) evaluation.

    The trapezoid collapses (plateau removed, ramps rescaled) whenever the
    requested peak rate is reached before the plateau would start. The
    modified kind replaces the first segment with a linear (theta, omega)
    relation and re-derives the downstream boundaries for continuity.
    """
    if a_r <= 0.0 or tau1 <= 0.0 or tau3 <= 0.0 or w_r_max <= 0.0:
        raise InvalidArgumentError(
            f"profile inputs must be positive: a_r={a_r}, tau1={tau1}, tau3={tau3}, w_r_max={w_r_max}"
        )
    if kind is ProfileKind.MODIFIED:
        return _build_modified(a_r, tau1, tau3, w_r_max)

    w1 = 0.5 * a_r * tau1
    w2 = w_r_max - 0.5 * a_r * tau3
    tau2 = (w2 - w1) / a_r
    if tau2 >= 0.0:
        th1 = a_r * tau1**2 / 6.0
        th2 = th1 + w1 * tau2 + 0.5 * a_r * tau2**2
        th3 = th2 + w2 * tau3 + a_r * tau3**2 / 3.0
        return RateProfile(ProfileKind.TRAPEZOID, a_r, tau1, tau3, tau2, w1, w2, th1, th2, th3, w_r_max)

    # No plateau: rescale both ramps so the peak rate still lands on w_r_max.
    a_p = np.sqrt(2.0 * a_r * w_r_max / (tau1 + tau3))
    t1p = a_p / a_r * tau1
    t3p = a_p / a_r * tau3
    th1 = a_p * t1p**2 / 6.0
    w1 = 0.5 * a_p * t1p
    th2 = th1 + w1 * t3p + a_p * t3p**2 / 3.0
    return RateProfile(ProfileKind.COLLAPSED, a_p, t1p, t3p, 0.0, w1, w_r_max, th1, th2, np.inf, w_r_max)


def _build_modified(a_r: float, tau1: float, tau3: float, w_r_max: float) -> RateProfile:
    th1 = a_r * tau1**2 / 6.0
    w1 = np.sqrt(a_r * th1)  # = a_r * tau1 / sqrt(6), below the trapezoid's w1
    w2 = w_r_max - 0.5 * a_r * tau3
    tau2 = (w2 - w1) / a_r
    if tau2 >= 0.0:
        th2 = th1 + w1 * tau2 + 0.5 * a_r * tau2**2
        th3 = th2 + w2 * tau3 + a_r * tau3**2 / 3.0
        # tau1_eff kept at the nominal ramp duration; the first segment is the
        # linear (theta, omega) replacement so its traversal time is nominal-plus.
        return RateProfile(ProfileKind.MODIFIED, a_r, tau1, tau3, tau2, w1, w2, th1, th2, th3, w_r_max)

    # Collapsed + modified: linear first segment up to w1 = sqrt(a' * th1'),
    # decel ramp (duration scaled like the collapsed shape) reaching w_r_max.
    # Solving w1 + a'^2 tau3 / (2 a_r) = w_r_max for the effective ramp slope:
    a_p = np.sqrt(a_r * w_r_max / (tau1 / np.sqrt(6.0) + 0.5 * tau3))
    t1p = a_p / a_r * tau1
    t3p = a_p / a_r * tau3
    th1 = a_p * t1p**2 / 6.0
    w1 = np.sqrt(a_p * th1)
    th3 = th1 + w1 * t3p + a_p * t3p**2 / 3.0
    # theta2 collapses onto theta1: the constant-acceleration segment is empty,
    # so evaluation routes angles above theta1 straight into the decel segment.
    return RateProfile(ProfileKind.MODIFIED, a_p, t1p, t3p, 0.0, w1, w_r_max, th1, th1, th3, w_r_max)


def solve_cubic_tau(p: float, q: float, tau_hi: float, stats: CubicStats | None = None) -> float:
    """Root of tau^3 + p*tau + q = 0 on the decel segment, in [0, tau_hi].

    Uses the trigonometric form on the -2pi/3 branch (the smaller positive
    root). A degenerate discriminant clamps the acos argument, and the result
    is clamped into range; both are recorded as warnings in the stats.
    """
    if p >= 0.0:
        raise InvalidArgumentError(f"cubic requires p < 0, got {p}")
    raw = 1.5 * q / p * np.sqrt(-3.0 / p)
    clamped = abs(raw) > 1.0
    arg = min(1.0, max(-1.0, raw))
    tau = 2.0 * np.sqrt(-p / 3.0) * np.cos(np.arccos(arg) / 3.0 - 2.0 * np.pi / 3.0)
    if tau < 0.0 or tau > tau_hi:
        clamped = True
        tau = min(max(tau, 0.0), tau_hi)
    if stats is None:
        stats = cubic_stats
    stats.record(p, q, tau, clamped)
    return float(tau)


def eval_omega_r(profile: RateProfile, theta_e: float) -> float:
    """Closed-form inversion of the profile: regulating rate at an error angle."""
    if theta_e < 0.0:
        raise InvalidArgumentError(f"theta_e must be non-negative, got {theta_e}")
    a = profile.alpha_eff
    w_max = profile.omega_r_max

    if profile.kind is ProfileKind.COLLAPSED:
        if theta_e < profile.theta1:
            tau = (6.0 * theta_e * profile.tau1_eff / a) ** (1.0 / 3.0)
            return 0.5 * a / profile.tau1_eff * tau * tau
        if theta_e < profile.theta2:
            return _decel_segment(profile, theta_e, profile.theta2)
        return w_max

    if theta_e < profile.theta1:
        if profile.kind is ProfileKind.MODIFIED:
            return float(np.sqrt(a / profile.theta1) * theta_e)
        tau = (6.0 * theta_e * profile.tau1_eff / a) ** (1.0 / 3.0)
        return 0.5 * a / profile.tau1_eff * tau * tau
    if theta_e < profile.theta2:
        w1 = profile.omega1
        tau = (-w1 + np.sqrt(w1 * w1 + 2.0 * a * (theta_e - profile.theta1))) / a
        return float(w1 + a * tau)
    if theta_e < profile.theta3:
        return _decel_segment(profile, theta_e, profile.theta3)
    return w_max


def _decel_segment(profile: RateProfile, theta_e: float, theta_end: float) -> float:
    a = profile.alpha_eff
    t3 = profile.tau3_eff
    p = -6.0 * profile.omega_r_max * t3 / a
    q = 6.0 * t3 * (theta_end - theta_e) / a
    tau = solve_cubic_tau(p, q, t3)
    return float(profile.omega_r_max - 0.5 * a / t3 * tau * tau)


def segment_of(profile: RateProfile, theta_e: float) -> int:
    """Profile segment index at an error angle: 0 ramp-up, 1 constant
    acceleration, 2 ramp-down, 3 plateau."""
    if theta_e < profile.theta1:
        return 0
    if theta_e < profile.theta2:
        return 1
    if theta_e < profile.plateau_angle:
        return 2
    return 3


def omega_r_partials(
    a_r: float,
    tau1: float,
    tau3: float,
    w_r_max: float,
    kind: ProfileKind,
    theta_e: float,
    eps: float = DEFAULT_FD_STEP,
    base: RateProfile | None = None,
) -> tuple[float, float, float, float]:
    """omega_R and its forward-difference partials w.r.t. (theta_e, alpha_R, omega_R_max).

    Perturbing alpha_R or omega_R_max rebuilds the whole profile, since every
    segment boundary depends on them.
    """
    if base is None:
        base = build_profile(a_r, tau1, tau3, w_r_max, kind)
    w0 = eval_omega_r(base, theta_e)
    d_theta = (eval_omega_r(base, theta_e + eps) - w0) / eps
    d_alpha = (eval_omega_r(build_profile(a_r + eps, tau1, tau3, w_r_max, kind), theta_e) - w0) / eps
    d_wmax = (eval_omega_r(build_profile(a_r, tau1, tau3, w_r_max + eps, kind), theta_e) - w0) / eps
    return w0, d_theta, d_alpha, d_wmax


def omega_r_vec_dot(
    a_r: float,
    tau1: float,
    tau3: float,
    w_r_max: float,
    kind: ProfileKind,
    theta_e: float,
    axis: Vec3,
    axis_dot: Vec3,
    theta_e_dot: float,
    a_r_dot: float,
    w_r_max_dot: float,
    eps: float = DEFAULT_FD_STEP,
    base: RateProfile | None = None,
) -> tuple[Vec3, float]:
    """Time derivative of the regulating-rate vector omega_R * axis.

    Returns (omega_R_dot vector in body frame, scalar omega_R).
    """
    w0, d_theta, d_alpha, d_wmax = omega_r_partials(a_r, tau1, tau3, w_r_max, kind, theta_e, eps, base)
    scalar_rate = d_theta * theta_e_dot + d_alpha * a_r_dot + d_wmax * w_r_max_dot
    return scalar_rate * np.asarray(axis, dtype=float) + w0 * np.asarray(axis_dot, dtype=float), w0


def alpha_r_dot(
    theta_e_dot: float,
    eta: float,
    a_max: float,
    a_min: float,
    sigma_value: float,
    axis: Vec3,
    axis_dot: Vec3,
    inertia: np.ndarray,
    gamma: float,
    feedforward_rate: float,
) -> float:
    """Analytic time derivative of the regulating acceleration.

    The blend-slope term is active only inside the blend region (sigma < 1;
    the kink at the boundary takes the one-sided zero derivative). The
    feed-forward rate is supplied by the caller as a backward difference at
    the control period.
    """
    axis = np.asarray(axis, dtype=float)
    j_axis = inertia @ axis
    n_j_axis = float(np.linalg.norm(j_axis))
    out = 0.0
    if sigma_value < 1.0:
        out += theta_e_dot / eta * (a_max - a_min)
    if n_j_axis > 0.0:
        out -= sigma_value * a_max / (n_j_axis**2) * float(j_axis @ (inertia @ np.asarray(axis_dot, dtype=float)))
        out -= sigma_value * gamma / n_j_axis * feedforward_rate
    return out
