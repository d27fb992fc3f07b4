"""6-DOF rigid-body flight dynamics and its fixed-step RK4 integrator.

Equations of motion, with R(q) the body-to-world rotation, ω the body
angular rate and I the diagonal inertia tensor:

    ṗ = v
    m v̇ = R(q) F_body − m g ẑ − c_drag (v − v_wind)
    q̇ = ½ q ⊗ (0, ω)
    I ω̇ = τ_body − ω × (I ω)

F_body and τ_body come from the rotors at their current speeds; wind
couples in through the linear drag term only. States advance with
classical fixed-step RK4; the quaternion is renormalized once per step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .airframe import Airframe, net_wrench
from .frames import as_quat, as_vec3, quat_norm
from .scenario import EnvironmentSample

DEFAULT_TIME_STEP = 0.001

# Orientation guard: a loose sanity bound for constructed states. The
# integrator itself keeps the norm within ~1e-15 of unity per step.
_ORIENTATION_NORM_TOL = 1e-6


class DivergenceError(Exception):
    """The integrator produced a non-finite state component."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


@dataclass
class DroneState:
    """Full kinematic state of one drone at time t.

    position/velocity are in the world frame, angular_velocity in the
    body frame, orientation the body-to-world unit quaternion.
    """

    t: float
    position: np.ndarray
    velocity: np.ndarray
    orientation: np.ndarray
    angular_velocity: np.ndarray

    def __post_init__(self):
        self.position = as_vec3(self.position, "position")
        self.velocity = as_vec3(self.velocity, "velocity")
        self.orientation = as_quat(self.orientation, "orientation")
        self.angular_velocity = as_vec3(self.angular_velocity, "angular_velocity")
        if not np.isfinite(self.t):
            raise ValueError("t must be finite")
        n = quat_norm(self.orientation)
        if abs(n - 1.0) > _ORIENTATION_NORM_TOL:
            raise ValueError(f"orientation must be a unit quaternion, norm is {n}")

    def copy(self) -> "DroneState":
        return DroneState(self.t, self.position.copy(), self.velocity.copy(),
                          self.orientation.copy(), self.angular_velocity.copy())


@dataclass
class Derivative:
    """Time derivative of a DroneState (integrator intermediate)."""

    d_position: np.ndarray
    d_velocity: np.ndarray
    d_orientation: np.ndarray
    d_angular_velocity: np.ndarray


def _rhs(position, velocity, orientation, angular_velocity, airframe: Airframe,
         env: EnvironmentSample, force_body, torque_body):
    # Raw right-hand side, written in scalars for speed and so that
    # non-finite components propagate (step() turns them into a
    # DivergenceError) instead of tripping validation helpers. Rotor
    # speeds are held constant over a step, so the wrench is evaluated
    # once by the caller. The quaternion may be slightly off-unit during
    # RK4 substeps; the 2/n^2 factor applies the rotation of its
    # normalized form.
    body = airframe.body
    qw, qx, qy, qz = orientation
    n2 = qw * qw + qx * qx + qy * qy + qz * qz
    s = 2.0 / n2
    # thrust acts along body +z: world direction is the third matrix column
    fz = force_body[2] / body.mass
    ax = s * (qx * qz + qy * qw) * fz
    ay = s * (qy * qz - qx * qw) * fz
    az = (1.0 - s * (qx * qx + qy * qy)) * fz - env.gravity
    accel = np.array([ax, ay, az])
    if body.linear_drag != 0.0:
        accel -= (body.linear_drag / body.mass) * (velocity - env.wind_velocity)

    wx, wy, wz = angular_velocity
    ix, iy, iz = body.inertia_diagonal
    # omega x (I omega) for a diagonal inertia tensor
    d_omega = np.array([
        (torque_body[0] - wy * wz * (iz - iy)) / ix,
        (torque_body[1] - wz * wx * (ix - iz)) / iy,
        (torque_body[2] - wx * wy * (iy - ix)) / iz,
    ])

    d_q = 0.5 * np.array([
        -qx * wx - qy * wy - qz * wz,
        qw * wx + qy * wz - qz * wy,
        qw * wy - qx * wz + qz * wx,
        qw * wz + qx * wy - qy * wx,
    ])
    return velocity, accel, d_q, d_omega


def state_derivative(state: DroneState, airframe: Airframe,
                     env: EnvironmentSample) -> Derivative:
    """Evaluate the equations of motion at the given state."""
    force_body, torque_body = net_wrench(airframe, env.air_density)
    dp, dv, dq, dw = _rhs(state.position, state.velocity, state.orientation,
                          state.angular_velocity, airframe, env,
                          force_body, torque_body)
    return Derivative(dp, dv, dq, dw)


def step(state: DroneState, airframe: Airframe, env: EnvironmentSample,
         dt: float) -> DroneState:
    """Advance one classical RK4 step of size dt and renormalize orientation.

    Deterministic: identical inputs produce bit-identical outputs. Raises
    DivergenceError (with the end-of-step time) if any component of the
    result is non-finite.
    """
    if not (dt > 0.0):
        raise ValueError(f"dt must be > 0, got {dt}")

    p, v, q, w = state.position, state.velocity, state.orientation, state.angular_velocity
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        # rotor speeds are held constant across the step (zero-order hold)
        force_body, torque_body = net_wrench(airframe, env.air_density)
        k1 = _rhs(p, v, q, w, airframe, env, force_body, torque_body)
        k2 = _rhs(p + 0.5 * dt * k1[0], v + 0.5 * dt * k1[1],
                  q + 0.5 * dt * k1[2], w + 0.5 * dt * k1[3], airframe, env,
                  force_body, torque_body)
        k3 = _rhs(p + 0.5 * dt * k2[0], v + 0.5 * dt * k2[1],
                  q + 0.5 * dt * k2[2], w + 0.5 * dt * k2[3], airframe, env,
                  force_body, torque_body)
        k4 = _rhs(p + dt * k3[0], v + dt * k3[1],
                  q + dt * k3[2], w + dt * k3[3], airframe, env,
                  force_body, torque_body)

        sixth = dt / 6.0
        new_p = p + sixth * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        new_v = v + sixth * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        new_q = q + sixth * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        new_w = w + sixth * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])

    t_end = state.t + dt
    if not (np.all(np.isfinite(new_p)) and np.all(np.isfinite(new_v))
            and np.all(np.isfinite(new_q)) and np.all(np.isfinite(new_w))):
        raise DivergenceError(f"non-finite state at t = {t_end}", t=t_end)

    norm = quat_norm(new_q)
    if not (norm > 1e-12 and np.isfinite(norm)):
        raise DivergenceError(f"orientation collapsed at t = {t_end}", t=t_end)
    new_q = new_q / norm

    return DroneState(t_end, new_p, new_v, new_q, new_w)
