"""Physical drone definition: body, rotors, and the rotor-to-wrench map.

Rotors sit in the body x-y plane and thrust along body +z with the
standard quadratic law f = c_T * rho * A * s^2 (s in rad/s). Each rotor
also transmits a reaction torque about body z whose sign follows its
spin direction. The inverse problem (which speeds realize a demanded
thrust and torque) is solved least-squares in s^2 through the
pseudo-inverse of the allocation matrix.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .frames import as_vec3

log = logging.getLogger(__name__)

CLOCKWISE = -1
COUNTER_CLOCKWISE = 1


class ConfigurationError(Exception):
    """A physically inconsistent or underactuated configuration."""


@dataclass
class Rotor:
    """One rotor: geometry, aerodynamic coefficients, and its current speed.

    ``spin_direction`` is +1 for counter-clockwise, -1 for clockwise
    (seen from above); it sets the sign of the reaction torque the rotor
    transmits to the body about +z.
    """

    position_body: np.ndarray
    spin_direction: int
    disk_area: float
    thrust_coefficient: float
    torque_coefficient: float
    max_speed: float
    current_speed: float = 0.0

    def __post_init__(self):
        self.position_body = as_vec3(self.position_body, "rotor position")
        if self.spin_direction not in (CLOCKWISE, COUNTER_CLOCKWISE):
            raise ValueError(f"spin_direction must be -1 or +1, got {self.spin_direction}")
        if not self.disk_area > 0.0:
            raise ValueError(f"disk_area must be > 0, got {self.disk_area}")
        if not self.thrust_coefficient > 0.0:
            raise ValueError(f"thrust_coefficient must be > 0, got {self.thrust_coefficient}")
        if self.torque_coefficient < 0.0:
            raise ValueError(f"torque_coefficient must be >= 0, got {self.torque_coefficient}")
        if not self.max_speed > 0.0:
            raise ValueError(f"max_speed must be > 0, got {self.max_speed}")
        if not 0.0 <= self.current_speed <= self.max_speed:
            raise ValueError(
                f"current_speed must be in [0, {self.max_speed}], got {self.current_speed}")


@dataclass
class Body:
    """Rigid-body mass properties plus a linear aerodynamic drag coefficient."""

    mass: float
    inertia_diagonal: np.ndarray
    linear_drag: float = 0.0

    def __post_init__(self):
        self.inertia_diagonal = as_vec3(self.inertia_diagonal, "inertia diagonal")
        if not self.mass > 0.0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if not np.all(self.inertia_diagonal > 0.0):
            raise ValueError(f"inertia components must be > 0, got {self.inertia_diagonal.tolist()}")
        if self.linear_drag < 0.0:
            raise ValueError(f"linear_drag must be >= 0, got {self.linear_drag}")


@dataclass
class Airframe:
    """A body plus at least two rotors."""

    body: Body
    rotors: list[Rotor] = field(default_factory=list)

    def __post_init__(self):
        if len(self.rotors) < 2:
            raise ValueError(f"an airframe needs at least 2 rotors, got {len(self.rotors)}")


def rotor_thrust(rotor: Rotor, air_density: float) -> float:
    """Thrust of one rotor in N, along body +z: c_T * rho * A * s^2."""
    if not air_density > 0.0:
        raise ValueError(f"air_density must be > 0, got {air_density}")
    s = rotor.current_speed
    return rotor.thrust_coefficient * air_density * rotor.disk_area * s * s


def net_wrench(airframe: Airframe, air_density: float) -> tuple[np.ndarray, np.ndarray]:
    """Total (force, torque) on the body from all rotors, in body axes.

    force  = sum_i f_i ẑ
    torque = sum_i [ r_i x (f_i ẑ) + spin_i * c_Q_i * rho * A_i * s_i^2 ẑ ]
    """
    if not air_density > 0.0:
        raise ValueError(f"air_density must be > 0, got {air_density}")
    fz = 0.0
    tx = ty = tz = 0.0
    for r in airframe.rotors:
        s2 = r.current_speed * r.current_speed
        f = r.thrust_coefficient * air_density * r.disk_area * s2
        fz += f
        # r x (f ẑ) = f * (y, -x, 0)
        tx += f * r.position_body[1]
        ty -= f * r.position_body[0]
        tz += r.spin_direction * r.torque_coefficient * air_density * r.disk_area * s2
    return np.array([0.0, 0.0, fz]), np.array([tx, ty, tz])


def allocation_matrix(airframe: Airframe, air_density: float) -> np.ndarray:
    """4 x n map from squared rotor speeds to (thrust, torque x/y/z)."""
    n = len(airframe.rotors)
    m = np.zeros((4, n))
    for i, r in enumerate(airframe.rotors):
        k = r.thrust_coefficient * air_density * r.disk_area
        m[0, i] = k
        m[1, i] = k * r.position_body[1]
        m[2, i] = -k * r.position_body[0]
        m[3, i] = r.spin_direction * r.torque_coefficient * air_density * r.disk_area
    return m


@lru_cache(maxsize=128)
def _allocation_pinv(key: tuple) -> tuple[np.ndarray, int]:
    m = np.array(key[1:], dtype=float).reshape(4, -1)
    return np.linalg.pinv(m), int(np.linalg.matrix_rank(m))


def _allocation_key(airframe: Airframe, air_density: float) -> tuple:
    # Geometry and coefficients fully determine the matrix, so the cache
    # key is their flattened values; rotor speed never enters.
    rows = allocation_matrix(airframe, air_density)
    return (air_density,) + tuple(rows.ravel().tolist())


def allocate(airframe: Airframe, desired_thrust: float, desired_torque,
             air_density: float) -> np.ndarray:
    """Rotor speeds (rad/s) realizing a demanded thrust (N) and torque (N·m).

    Least-squares solve in squared speeds, then s = sqrt(max(s^2, 0))
    clamped per rotor to [0, max_speed]. Saturation is silent (flight
    continues degraded); a debug log line records the clamp. Raises
    ConfigurationError when the allocation matrix is rank-deficient,
    i.e. the craft cannot span all four wrench components.
    """
    if desired_thrust < 0.0:
        raise ValueError(f"desired_thrust must be >= 0, got {desired_thrust}")
    desired_torque = as_vec3(desired_torque, "desired_torque")
    pinv, rank = _allocation_pinv(_allocation_key(airframe, air_density))
    if rank < 4:
        raise ConfigurationError(
            f"allocation matrix is rank-deficient (rank {rank} < 4); "
            "this rotor layout cannot realize independent thrust and torques")
    demand = np.array([desired_thrust, desired_torque[0], desired_torque[1], desired_torque[2]])
    s_squared = pinv @ demand
    speeds = np.sqrt(np.maximum(s_squared, 0.0))
    max_speeds = np.array([r.max_speed for r in airframe.rotors])
    if np.any(speeds > max_speeds):
        log.debug("rotor saturation: demand %s clamped from %s", demand.tolist(), speeds.tolist())
        speeds = np.minimum(speeds, max_speeds)
    return speeds


def set_rotor_speeds(airframe: Airframe, speeds) -> None:
    """Write commanded speeds onto the rotors, clamping to [0, max_speed]."""
    speeds = np.asarray(speeds, dtype=float)
    if speeds.shape != (len(airframe.rotors),):
        raise ValueError(
            f"expected {len(airframe.rotors)} speeds, got shape {speeds.shape}")
    for r, s in zip(airframe.rotors, speeds):
        r.current_speed = min(max(float(s), 0.0), r.max_speed)


def hover_speed(airframe: Airframe, gravity: float, air_density: float) -> float:
    """Closed-form equal-speed hover for a symmetric craft: sqrt(mg / (n k))."""
    k = sum(r.thrust_coefficient * air_density * r.disk_area for r in airframe.rotors)
    return math.sqrt(airframe.body.mass * gravity / k)
