"""Waypoint-following cascade controller.

Maps (current state, target setpoint) to rotor speed commands through a
PD cascade:

1. desired acceleration  a_des = Kp (target − p) − Kd v + g ẑ
2. desired thrust        T = m (a_des · ẑ_body), never negative;
   desired roll/pitch from a small-angle inversion of the a_des
   direction at the commanded yaw, clamped to ±max_tilt
3. attitude PD           angular accel = Kp_att e_att − Kd_att ω,
   torque = I ∘ accel, with e_att the small-angle attitude error
4. rotor allocation maps (T, torque) to speeds

The defaults below are tuned for a 1 kg craft with 0.2 m arms; every
gain is per-drone configurable. No integral action: steady wind shows up
as a small position offset rather than being trimmed out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .airframe import Airframe, allocate
from .dynamics import DroneState
from .frames import as_vec3, quat_conjugate, quat_from_euler, quat_multiply

DEFAULT_POSITION_KP = 2.0
DEFAULT_POSITION_KD = 2.8
DEFAULT_ATTITUDE_KP = 60.0
DEFAULT_ATTITUDE_KD = 15.0
DEFAULT_MAX_TILT = 0.5
DEFAULT_CAPTURE_RADIUS = 0.5


@dataclass
class ControllerGains:
    position_kp: float = DEFAULT_POSITION_KP
    position_kd: float = DEFAULT_POSITION_KD
    attitude_kp: float = DEFAULT_ATTITUDE_KP
    attitude_kd: float = DEFAULT_ATTITUDE_KD
    max_tilt: float = DEFAULT_MAX_TILT
    capture_radius: float = DEFAULT_CAPTURE_RADIUS

    def __post_init__(self):
        for name in ("position_kp", "position_kd", "attitude_kp", "attitude_kd"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0.0 < self.max_tilt < math.pi / 2.0:
            raise ValueError(f"max_tilt must be in (0, pi/2), got {self.max_tilt}")
        if not self.capture_radius > 0.0:
            raise ValueError(f"capture_radius must be > 0, got {self.capture_radius}")


@dataclass
class Setpoint:
    """A position target with a commanded yaw."""

    target_position: np.ndarray
    target_yaw: float = 0.0

    def __post_init__(self):
        self.target_position = as_vec3(self.target_position, "target position")
        if not math.isfinite(self.target_yaw):
            raise ValueError("target_yaw must be finite")


def _clamp(value: float, limit: float) -> float:
    return max(-limit, min(limit, value))


def thrust_and_attitude(state: DroneState, setpoint: Setpoint, airframe: Airframe,
                        gains: ControllerGains,
                        gravity: float) -> tuple[float, float, float, float]:
    """Outer-loop output: (total thrust N, desired roll, pitch, yaw rad).

    The demanded acceleration is projected on the current body z axis for
    thrust, and its direction is inverted at small angles for the tilt
    setpoint, clamped to +-max_tilt.
    """
    a_des = (gains.position_kp * (setpoint.target_position - state.position)
             - gains.position_kd * state.velocity)
    a_des = a_des + np.array([0.0, 0.0, gravity])

    qw, qx, qy, qz = state.orientation
    z_body = np.array([
        2.0 * (qx * qz + qy * qw),
        2.0 * (qy * qz - qx * qw),
        1.0 - 2.0 * (qx * qx + qy * qy),
    ])
    thrust = airframe.body.mass * max(0.0, float(a_des @ z_body))

    norm_a = math.sqrt(a_des[0] ** 2 + a_des[1] ** 2 + a_des[2] ** 2)
    if norm_a < 1e-9:
        tilt_x, tilt_y = 0.0, 0.0
    else:
        tilt_x = a_des[0] / norm_a
        tilt_y = a_des[1] / norm_a
    yaw = setpoint.target_yaw
    cos_y, sin_y = math.cos(yaw), math.sin(yaw)
    pitch_des = _clamp(tilt_x * cos_y + tilt_y * sin_y, gains.max_tilt)
    roll_des = _clamp(tilt_x * sin_y - tilt_y * cos_y, gains.max_tilt)
    return thrust, roll_des, pitch_des, yaw


def compute_commands(state: DroneState, setpoint: Setpoint, airframe: Airframe,
                     gains: ControllerGains, gravity: float,
                     air_density: float) -> np.ndarray:
    """Rotor speed commands (rad/s) steering the drone toward the setpoint.

    Pure function of its inputs; a rank-deficient rotor layout raises
    ConfigurationError out of the allocation step.
    """
    thrust, roll_des, pitch_des, yaw = thrust_and_attitude(
        state, setpoint, airframe, gains, gravity)

    q_des = quat_from_euler(roll_des, pitch_des, yaw)
    q_err = quat_multiply(quat_conjugate(state.orientation), q_des)
    if q_err[0] < 0.0:
        q_err = -q_err
    attitude_error = 2.0 * q_err[1:4]

    alpha = gains.attitude_kp * attitude_error - gains.attitude_kd * state.angular_velocity
    torque = airframe.body.inertia_diagonal * alpha
    return allocate(airframe, thrust, torque, air_density)


def waypoint_reached(state: DroneState, setpoint: Setpoint,
                     gains: ControllerGains) -> bool:
    """True iff the drone sits within capture_radius of the target (inclusive)."""
    d = state.position - setpoint.target_position
    return math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2) <= gains.capture_radius
