"""Quaternion and small-vector algebra.

Quaternions are stored as [vector; scalar]. With q_BA the attitude of frame B
relative to frame A, ``to_rotation(q_BA)`` returns the matrix that maps
A-frame components to B-frame components, and frame composition satisfies
q_CA = qmul(q_CB, q_BA) with matching matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Vec3 = np.ndarray
RotationMatrix = np.ndarray

UNIT_NORM_TOL = 1e-6


class InvalidArgumentError(ValueError):
    """Raised when an operation receives a non-finite or out-of-contract input."""


def cross(a: Vec3, b: Vec3) -> Vec3:
    """Cross product for 3-vectors (faster than np.cross for single vectors)."""
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


def vec3(x: float, y: float, z: float) -> Vec3:
    return np.array([x, y, z], dtype=float)


def check_finite(v: np.ndarray, name: str = "vector") -> None:
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError(f"{name} has non-finite components: {v}")


@dataclass
class Quaternion:
    """Unit quaternion [v; w] carrying the attitude of one frame w.r.t. another."""

    v: Vec3
    w: float

    def __post_init__(self) -> None:
        self.v = np.asarray(self.v, dtype=float)
        if self.v.shape != (3,):
            raise InvalidArgumentError(f"quaternion vector part must be 3-vector, got {self.v.shape}")
        self.w = float(self.w)

    @staticmethod
    def identity() -> "Quaternion":
        return Quaternion(np.zeros(3), 1.0)

    @staticmethod
    def from_axis_angle(axis: Vec3, angle: float) -> "Quaternion":
        axis = np.asarray(axis, dtype=float)
        n = np.linalg.norm(axis)
        if n == 0.0:
            return Quaternion.identity()
        half = 0.5 * angle
        return Quaternion(np.sin(half) * axis / n, np.cos(half))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.v, [self.w]])

    def norm(self) -> float:
        return float(np.sqrt(self.v @ self.v + self.w * self.w))

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0 or not np.isfinite(n):
            raise InvalidArgumentError("cannot normalize zero/non-finite quaternion")
        return Quaternion(self.v / n, self.w / n)

    def negated(self) -> "Quaternion":
        return Quaternion(-self.v, -self.w)

    def canonicalized(self) -> "Quaternion":
        """Flip sign so the scalar part is non-negative (q and -q are the same attitude)."""
        return self.negated() if self.w < 0.0 else self


def _require_unit(q: Quaternion, name: str) -> None:
    check_finite(q.v, f"{name}.v")
    if not np.isfinite(q.w):
        raise InvalidArgumentError(f"{name}.w is non-finite")
    if abs(q.norm() - 1.0) > UNIT_NORM_TOL:
        raise InvalidArgumentError(f"{name} is not unit norm (|q| = {q.norm():.9f})")


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Quaternion product p (x) q.

    Vector part p_w*q_v + q_w*p_v - p_v x q_v, scalar part p_w*q_w - p_v.q_v.
    The result is renormalized.
    """
    _require_unit(p, "p")
    _require_unit(q, "q")
    v = p.w * q.v + q.w * p.v - cross(p.v, q.v)
    w = p.w * q.w - p.v @ q.v
    return Quaternion(v, w).normalized()


def qinv(q: Quaternion) -> Quaternion:
    """Inverse of a unit quaternion: vector part negated, scalar preserved."""
    return Quaternion(-q.v, q.w)


def to_rotation(q: Quaternion) -> RotationMatrix:
    """Rotation matrix of q_BA, mapping A-frame components to B-frame components."""
    v, w = q.v, q.w
    vx, vy, vz = v
    skew = np.array([[0.0, -vz, vy], [vz, 0.0, -vx], [-vy, vx, 0.0]])
    return (w * w - v @ v) * np.eye(3) + 2.0 * np.outer(v, v) - 2.0 * w * skew


def qkin_rate(q: Quaternion, omega: Vec3) -> np.ndarray:
    """Quaternion time derivative [v_dot; w_dot] for body rate omega (rad/s).

    Implements 0.5 * [q_w*omega - omega x q_v; -omega . q_v].
    """
    omega = np.asarray(omega, dtype=float)
    v = 0.5 * (q.w * omega - cross(omega, q.v))
    w = -0.5 * (omega @ q.v)
    return np.concatenate([v, [w]])
