"""World definition: physics constants, flying conditions, and the clock.

A scenario bundles everything the drones fly inside of: gravity and air
density, a uniform constant wind, obstacles as axis-aligned boxes, the
geodetic anchor of the world frame, and the global time step that keeps
the whole swarm on one clock. Sampling the environment is a function of
(position, time) so that non-uniform fields can land later without
signature changes, even though this release returns constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frames import InertialFrame, as_vec3

DEFAULT_GRAVITY = 9.81
DEFAULT_AIR_DENSITY = 1.225


@dataclass
class Physics:
    gravity: float = DEFAULT_GRAVITY
    air_density: float = DEFAULT_AIR_DENSITY

    def __post_init__(self):
        if not self.gravity > 0.0:
            raise ValueError(f"gravity must be > 0, got {self.gravity}")
        if not self.air_density > 0.0:
            raise ValueError(f"air_density must be > 0, got {self.air_density}")


@dataclass
class Box:
    """Axis-aligned box with inclusive boundaries."""

    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        self.min_corner = as_vec3(self.min_corner, "box min corner")
        self.max_corner = as_vec3(self.max_corner, "box max corner")
        if np.any(self.min_corner > self.max_corner):
            raise ValueError(
                f"box min corner {self.min_corner.tolist()} exceeds "
                f"max corner {self.max_corner.tolist()}")


@dataclass
class FlyingConditions:
    """Environmental context: uniform constant wind and box obstacles."""

    wind_velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    obstacles: list[Box] = field(default_factory=list)

    def __post_init__(self):
        self.wind_velocity = as_vec3(self.wind_velocity, "wind velocity")


@dataclass
class Scenario:
    physics: Physics
    conditions: FlyingConditions
    inertial_frame: InertialFrame
    reference_time_step: float = 0.001
    max_duration: float = 60.0
    recording_interval: float = 0.1

    def __post_init__(self):
        if not self.reference_time_step > 0.0:
            raise ValueError(f"reference_time_step must be > 0, got {self.reference_time_step}")
        if not self.max_duration > 0.0:
            raise ValueError(f"max_duration must be > 0, got {self.max_duration}")
        if not self.recording_interval > 0.0:
            raise ValueError(f"recording_interval must be > 0, got {self.recording_interval}")


@dataclass
class EnvironmentSample:
    """Constants and wind as seen by one drone for one integration step."""

    gravity: float
    air_density: float
    wind_velocity: np.ndarray


def sample_environment(scenario: Scenario, position, t: float) -> EnvironmentSample:
    """Environment at a point and time; uniform and constant in this release."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    return EnvironmentSample(
        gravity=scenario.physics.gravity,
        air_density=scenario.physics.air_density,
        wind_velocity=scenario.conditions.wind_velocity,
    )


def point_in_box(box: Box, p) -> bool:
    p = as_vec3(p, "point")
    return bool(np.all(p >= box.min_corner) and np.all(p <= box.max_corner))


def point_in_obstacle(conditions: FlyingConditions, p) -> bool:
    """True iff p lies inside (inclusive) any obstacle box."""
    p = as_vec3(p, "point")
    for box in conditions.obstacles:
        if np.all(p >= box.min_corner) and np.all(p <= box.max_corner):
            return True
    return False


def segment_hits_box(box: Box, a, b) -> bool:
    """Slab test for segment [a, b] against one box, inclusive boundaries.

    A degenerate segment (a == b) reduces to the point-containment test.
    """
    a = as_vec3(a, "segment start")
    b = as_vec3(b, "segment end")
    t_enter, t_exit = 0.0, 1.0
    for axis in range(3):
        origin = a[axis]
        direction = b[axis] - a[axis]
        lo = box.min_corner[axis]
        hi = box.max_corner[axis]
        if direction == 0.0:
            if origin < lo or origin > hi:
                return False
        else:
            t1 = (lo - origin) / direction
            t2 = (hi - origin) / direction
            if t1 > t2:
                t1, t2 = t2, t1
            t_enter = max(t_enter, t1)
            t_exit = min(t_exit, t2)
            if t_enter > t_exit:
                return False
    return True


def segment_hits_obstacle(conditions: FlyingConditions, a, b) -> bool:
    """True iff the segment from a to b touches any obstacle box."""
    return any(segment_hits_box(box, a, b) for box in conditions.obstacles)
