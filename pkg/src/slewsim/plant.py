"""Ground-truth rigid-body dynamics with RK4 propagation and zero-order-hold torque."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attmath import InvalidArgumentError, Quaternion, Vec3, cross, qkin_rate, vec3

DEG = np.pi / 180.0


@dataclass
class SatelliteParams:
    """Physical plant: inertia and the slew-rate / torque / disturbance bounds."""

    inertia: np.ndarray                      # kg*m^2, symmetric positive definite
    omega_max: float = 3.0 * DEG             # rad/s
    u_max: float = 150.0                     # N*m
    d_max: float = 2.0                       # N*m

    def __post_init__(self) -> None:
        self.inertia = np.asarray(self.inertia, dtype=float)
        if self.inertia.shape != (3, 3):
            raise InvalidArgumentError(f"inertia must be 3x3, got {self.inertia.shape}")
        if not np.allclose(self.inertia, self.inertia.T, atol=1e-9):
            raise InvalidArgumentError("inertia must be symmetric")
        eigvals = np.linalg.eigvalsh(self.inertia)
        if np.any(eigvals <= 0.0):
            raise InvalidArgumentError(f"inertia must be positive definite, eigenvalues {eigvals}")
        if self.omega_max <= 0.0 or self.u_max <= 0.0 or self.d_max < 0.0:
            raise InvalidArgumentError("omega_max and u_max must be positive, d_max non-negative")
        self.inertia_inv = np.linalg.inv(self.inertia)
        self.lambda_min = float(eigvals[0])
        self.sigma_top = float(np.linalg.svd(self.inertia, compute_uv=False)[0])

    @staticmethod
    def default() -> "SatelliteParams":
        """Large-satellite baseline used throughout the experiments."""
        return SatelliteParams(
            inertia=np.array(
                [
                    [21400.0, 2100.0, 1800.0],
                    [2100.0, 20100.0, 500.0],
                    [1800.0, 500.0, 5000.0],
                ]
            )
        )


@dataclass
class BodyState:
    """Propagated rigid-body state at time t."""

    q_b: Quaternion
    omega_b: Vec3
    t: float = 0.0

    @staticmethod
    def at_rest() -> "BodyState":
        return BodyState(Quaternion.identity(), np.zeros(3), 0.0)


@dataclass
class DisturbanceModel:
    """Componentwise sinusoidal disturbance torque at near-orbital frequency."""

    amplitudes: Vec3 = field(default_factory=lambda: vec3(1.1, 0.9, 1.0))
    frequencies: Vec3 = field(default_factory=lambda: vec3(0.0012, 0.0010, 0.0013))
    phases: Vec3 = field(default_factory=lambda: vec3(np.pi / 6.0, 0.0, np.pi / 2.0))
    enabled: bool = True

    def at(self, t: float) -> Vec3:
        if not self.enabled:
            return np.zeros(3)
        return self.amplitudes * np.sin(self.frequencies * t + self.phases)


def dynamics_rhs(
    q_b: Quaternion,
    omega_b: Vec3,
    u: Vec3,
    d: Vec3,
    params: SatelliteParams,
) -> tuple[np.ndarray, Vec3]:
    """State derivative (q_dot 4-vector, omega_dot) under applied and disturbance torque."""
    omega_dot = params.inertia_inv @ (u + d - cross(omega_b, params.inertia @ omega_b))
    return qkin_rate(q_b, omega_b), omega_dot


def rk4_step(
    state: BodyState,
    u_held: Vec3,
    dt: float,
    params: SatelliteParams,
    disturbance: DisturbanceModel,
) -> BodyState:
    """One classic RK4 step with the torque held constant and the disturbance
    evaluated at each stage time; the quaternion is renormalized afterwards."""
    if dt <= 0.0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    q = state.q_b.as_array()
    w = np.asarray(state.omega_b, dtype=float)
    t = state.t

    def rhs(qa: np.ndarray, wa: Vec3, ta: float) -> tuple[np.ndarray, Vec3]:
        return dynamics_rhs(Quaternion(qa[:3], qa[3]), wa, u_held, disturbance.at(ta), params)

    k1q, k1w = rhs(q, w, t)
    k2q, k2w = rhs(q + 0.5 * dt * k1q, w + 0.5 * dt * k1w, t + 0.5 * dt)
    k3q, k3w = rhs(q + 0.5 * dt * k2q, w + 0.5 * dt * k2w, t + 0.5 * dt)
    k4q, k4w = rhs(q + dt * k3q, w + dt * k3w, t + dt)
    q_next = q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
    w_next = w + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
    q_next /= np.linalg.norm(q_next)
    return BodyState(Quaternion(q_next[:3], q_next[3]), w_next, t + dt)
