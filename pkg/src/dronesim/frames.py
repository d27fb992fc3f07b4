"""Rotation and reference-frame algebra.

Conventions used across the simulator:

* Vectors are length-3 float64 numpy arrays. The world frame is
  East-North-Up (x east, y north, z up); the body frame is x forward,
  y left, z up.
* Orientations are unit quaternions stored as length-4 arrays
  ``[w, x, y, z]`` encoding the body-to-world rotation.
* Every public operation that returns a quaternion renormalizes it,
  so the norm stays within 1e-9 of unity no matter how many times the
  operations are chained.

Geodetic export uses a local equirectangular projection around the
scenario origin with a spherical Earth of radius 6 371 000 m. That is
accurate to well under a meter for the few-kilometer scenes this
simulator targets, and is documented as approximate for anything larger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_M = 6_371_000.0


def vec3(x: float, y: float, z: float) -> np.ndarray:
    """Build a 3-vector as a float64 array."""
    return np.array([float(x), float(y), float(z)])


def as_vec3(v, name: str = "vector") -> np.ndarray:
    """Coerce to a finite float64 3-vector, raising ValueError otherwise."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have exactly 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite components: {arr.tolist()}")
    return arr


# ---------------------------------------------------------------------------
# Quaternions ([w, x, y, z], body-to-world)
# ---------------------------------------------------------------------------

def quat_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def as_quat(q, name: str = "quaternion") -> np.ndarray:
    arr = np.asarray(q, dtype=float)
    if arr.shape != (4,):
        raise ValueError(f"{name} must have exactly 4 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite components: {arr.tolist()}")
    return arr


def quat_norm(q) -> float:
    w, x, y, z = q
    return math.sqrt(w * w + x * x + y * y + z * z)


def quat_normalize(q) -> np.ndarray:
    """Return q scaled to unit norm.

    Raises ValueError for non-finite or near-zero input, where no
    rotation can be recovered.
    """
    q = as_quat(q)
    n = quat_norm(q)
    if n < 1e-12:
        raise ValueError("cannot normalize a near-zero quaternion")
    return q / n


def quat_conjugate(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([w, -x, -y, -z])


def quat_inverse(q) -> np.ndarray:
    """Inverse rotation; for the unit quaternions used here, the conjugate."""
    return quat_conjugate(quat_normalize(q))


def quat_multiply(q1, q2) -> np.ndarray:
    """Hamilton product q1 ⊗ q2 (apply q2 first, then q1)."""
    w1, x1, y1, z1 = q1
    w2, x2, y2, z2 = q2
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    """Unit quaternion for a rotation of ``angle`` radians about ``axis``."""
    axis = as_vec3(axis, "axis")
    n = math.sqrt(axis[0] ** 2 + axis[1] ** 2 + axis[2] ** 2)
    if n < 1e-12:
        raise ValueError("rotation axis must be non-zero")
    half = 0.5 * float(angle)
    s = math.sin(half) / n
    return np.array([math.cos(half), axis[0] * s, axis[1] * s, axis[2] * s])


def quat_from_euler(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Quaternion from roll (about x), pitch (about y), yaw (about z).

    Angles compose in ZYX order: q = q_yaw ⊗ q_pitch ⊗ q_roll.
    """
    cr, sr = math.cos(0.5 * roll), math.sin(0.5 * roll)
    cp, sp = math.cos(0.5 * pitch), math.sin(0.5 * pitch)
    cy, sy = math.cos(0.5 * yaw), math.sin(0.5 * yaw)
    return np.array([
        cy * cp * cr + sy * sp * sr,
        cy * cp * sr - sy * sp * cr,
        cy * sp * cr + sy * cp * sr,
        sy * cp * cr - cy * sp * sr,
    ])


def quat_to_matrix(q) -> np.ndarray:
    """3x3 rotation matrix mapping body vectors into the world frame."""
    w, x, y, z = quat_normalize(q)
    xx, yy, zz = x * x, y * y, z * z
    wx, wy, wz = w * x, w * y, w * z
    xy, xz, yz = x * y, x * z, y * z
    return np.array([
        [1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy)],
        [2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx)],
        [2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)],
    ])


def rotate(q, v) -> np.ndarray:
    """Rotate body-frame vector ``v`` into the world frame.

    Preserves the Euclidean norm of ``v``. Raises ValueError on
    non-finite components in either argument.
    """
    q = quat_normalize(q)
    v = as_vec3(v)
    w, qx, qy, qz = q
    vx, vy, vz = v
    # v' = v + w * t + qv x t  with  t = 2 * qv x v
    tx = 2.0 * (qy * vz - qz * vy)
    ty = 2.0 * (qz * vx - qx * vz)
    tz = 2.0 * (qx * vy - qy * vx)
    return np.array([
        vx + w * tx + qy * tz - qz * ty,
        vy + w * ty + qz * tx - qx * tz,
        vz + w * tz + qx * ty - qy * tx,
    ])


def integrate_orientation(q, omega_body, dt: float) -> np.ndarray:
    """Advance a quaternion by one step of q̇ = ½ q ⊗ (0, ω) and renormalize.

    ``omega_body`` is the angular velocity in the body frame (rad/s).
    The normalized explicit step is second-order accurate in the rotation
    angle for constant ω. dt must be strictly positive.

    Scalar math throughout: this sits on the hot path of long
    propagations (millions of calls).
    """
    if not (dt > 0.0):
        raise ValueError(f"dt must be > 0, got {dt}")
    try:
        qw, qx, qy, qz = (float(c) for c in q)
        ox, oy, oz = (float(c) for c in omega_body)
    except (TypeError, ValueError) as err:
        raise ValueError("quaternion needs 4 components and omega_body 3") from err
    if not (math.isfinite(qw) and math.isfinite(qx) and math.isfinite(qy)
            and math.isfinite(qz) and math.isfinite(ox) and math.isfinite(oy)
            and math.isfinite(oz)):
        raise ValueError("non-finite components in quaternion or omega_body")
    half = 0.5 * dt
    nw = qw + half * (-qx * ox - qy * oy - qz * oz)
    nx = qx + half * (qw * ox + qy * oz - qz * oy)
    ny = qy + half * (qw * oy - qx * oz + qz * ox)
    nz = qz + half * (qw * oz + qx * oy - qy * ox)
    norm = math.sqrt(nw * nw + nx * nx + ny * ny + nz * nz)
    if norm < 1e-12:
        raise ValueError("integration collapsed the quaternion to zero norm")
    return np.array([nw / norm, nx / norm, ny / norm, nz / norm])


# ---------------------------------------------------------------------------
# Geodetic anchoring
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InertialFrame:
    """World frame anchor: ENU axes tangent to the Earth at a geodetic origin."""

    latitude_deg: float
    longitude_deg: float
    altitude_m: float = 0.0
    axes: str = "ENU"

    def __post_init__(self):
        if not (-90.0 <= self.latitude_deg <= 90.0):
            raise ValueError(f"latitude must be in [-90, 90], got {self.latitude_deg}")
        if not (-180.0 <= self.longitude_deg <= 180.0):
            raise ValueError(f"longitude must be in [-180, 180], got {self.longitude_deg}")
        if not math.isfinite(self.altitude_m):
            raise ValueError("altitude must be finite")
        if self.axes != "ENU":
            raise ValueError(f"unsupported axes convention {self.axes!r}, only 'ENU'")


def geo_project(frame: InertialFrame, p) -> tuple[float, float, float]:
    """Map a local ENU position (m) to (latitude deg, longitude deg, altitude m).

    Equirectangular projection about the frame origin; exact inverse of
    :func:`geo_unproject`. Intended for local scenes (positions small
    against the Earth radius); undefined at the poles.
    """
    p = as_vec3(p, "position")
    lat0 = math.radians(frame.latitude_deg)
    cos_lat0 = math.cos(lat0)
    if abs(cos_lat0) < 1e-9:
        raise ValueError("projection origin too close to a pole")
    lat = frame.latitude_deg + math.degrees(p[1] / EARTH_RADIUS_M)
    lon = frame.longitude_deg + math.degrees(p[0] / (EARTH_RADIUS_M * cos_lat0))
    alt = frame.altitude_m + p[2]
    return (lat, lon, alt)


def geo_unproject(frame: InertialFrame, latitude_deg: float, longitude_deg: float,
                  altitude_m: float) -> np.ndarray:
    """Inverse of :func:`geo_project`: geodetic coordinates to local ENU meters."""
    lat0 = math.radians(frame.latitude_deg)
    cos_lat0 = math.cos(lat0)
    if abs(cos_lat0) < 1e-9:
        raise ValueError("projection origin too close to a pole")
    east = math.radians(longitude_deg - frame.longitude_deg) * EARTH_RADIUS_M * cos_lat0
    north = math.radians(latitude_deg - frame.latitude_deg) * EARTH_RADIUS_M
    up = altitude_m - frame.altitude_m
    return np.array([east, north, up])
