"""Lock-step swarm simulation on one shared clock.

Every tick of the scenario's reference time step, each drone samples the
environment, computes rotor commands toward its current setpoint, and
takes one dynamics step; setpoints advance when waypoints are captured.
Interaction checks (pairwise separation, obstacle containment) run once
per tick on the post-step snapshot, after every drone's model update,
and are purely observational: violations become events, never evasive
maneuvers.

Drones that finish their route keep station-holding at their last
setpoint until the whole swarm is done; drones that hit the ground or
diverge are deactivated and keep their last state. Per-drone stepping
may run on a thread pool (``parallel=True``) because within a tick no
drone reads another's state; results are identical bit for bit in both
modes.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dynamics
from .airframe import Airframe, set_rotor_speeds
from .control import ControllerGains, Setpoint, compute_commands, waypoint_reached
from .dynamics import DivergenceError, DroneState
from .scenario import FlyingConditions, Scenario, point_in_obstacle, sample_environment

WAYPOINT_REACHED = "waypoint_reached"
SEPARATION_VIOLATION = "separation_violation"
OBSTACLE_COLLISION = "obstacle_collision"
GROUND_CONTACT = "ground_contact"
MISSION_COMPLETE = "mission_complete"
DIVERGENCE = "divergence"

EVENT_KINDS = (WAYPOINT_REACHED, SEPARATION_VIOLATION, OBSTACLE_COLLISION,
               GROUND_CONTACT, MISSION_COMPLETE, DIVERGENCE)

DEFAULT_MIN_SEPARATION = 2.0
DEFAULT_RECORDING_INTERVAL = 0.1


@dataclass
class Drone:
    id: str
    airframe: Airframe
    state: DroneState
    gains: ControllerGains = field(default_factory=ControllerGains)
    route: list[Setpoint] = field(default_factory=list)

    def __post_init__(self):
        if not self.id:
            raise ValueError("drone id must be non-empty")


@dataclass
class Swarm:
    drones: list[Drone]
    min_separation: float = DEFAULT_MIN_SEPARATION

    def __post_init__(self):
        if not self.drones:
            raise ValueError("a swarm needs at least one drone")
        ids = [d.id for d in self.drones]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"drone ids must be unique, duplicated: {dup}")
        if self.min_separation < 0.0:
            raise ValueError(f"min_separation must be >= 0, got {self.min_separation}")


@dataclass
class SimEvent:
    t: float
    kind: str
    drone_ids: tuple[str, ...]
    payload: dict = field(default_factory=dict)


@dataclass
class Trajectory:
    """Recorded states per drone plus everything notable that happened."""

    samples: dict[str, list[DroneState]]
    events: list[SimEvent]

    def drone_ids(self) -> list[str]:
        return list(self.samples.keys())


def _instant_violations(ids: list[str], positions: list[np.ndarray],
                        min_separation: float, conditions: FlyingConditions,
                        t: float) -> list[SimEvent]:
    events = []
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            delta = positions[i] - positions[j]
            distance = float(np.sqrt(delta @ delta))
            if distance < min_separation:
                pair = tuple(sorted((ids[i], ids[j])))
                midpoint = 0.5 * (positions[i] + positions[j])
                events.append(SimEvent(t, SEPARATION_VIOLATION, pair, {
                    "distance_m": distance,
                    "min_separation_m": min_separation,
                    "position": midpoint.tolist(),
                }))
    if conditions.obstacles:
        for drone_id, pos in zip(ids, positions):
            if point_in_obstacle(conditions, pos):
                events.append(SimEvent(t, OBSTACLE_COLLISION, (drone_id,), {
                    "position": pos.tolist(),
                }))
    return events


def check_interactions(swarm: Swarm, conditions: FlyingConditions,
                       t: float) -> list[SimEvent]:
    """Instantaneous pairwise-separation and obstacle checks at time t.

    Returns one separation_violation per unordered pair closer than
    min_separation and one obstacle_collision per drone inside a box.
    Episode deduplication over time is handled by :func:`simulate`.
    """
    ids = [d.id for d in swarm.drones]
    positions = [d.state.position for d in swarm.drones]
    return _instant_violations(ids, positions, swarm.min_separation, conditions, t)


def _violation_key(event: SimEvent) -> tuple:
    return (event.kind,) + event.drone_ids


@dataclass
class _DroneRun:
    drone: Drone
    state: DroneState
    status: str = "flying"  # flying | complete | deactivated
    route_index: int = 0
    hold: Setpoint | None = None

    def current_setpoint(self) -> Setpoint:
        if self.status == "flying" and self.route_index < len(self.drone.route):
            return self.drone.route[self.route_index]
        assert self.hold is not None
        return self.hold


def _step_one(run: _DroneRun, scenario: Scenario, dt: float):
    """Advance one drone by one tick; returns the new state or the error.

    Touches only this drone's state and airframe, so calls for different
    drones are safe to run concurrently.
    """
    env = sample_environment(scenario, run.state.position, run.state.t)
    try:
        speeds = compute_commands(run.state, run.current_setpoint(), run.drone.airframe,
                                  run.drone.gains, env.gravity, env.air_density)
        set_rotor_speeds(run.drone.airframe, speeds)
        return dynamics.step(run.state, run.drone.airframe, env, dt), None
    except DivergenceError as err:
        return None, err


def simulate(swarm: Swarm, scenario: Scenario,
             recording_interval: float = DEFAULT_RECORDING_INTERVAL,
             parallel: bool = False) -> Trajectory:
    """Run the swarm until every drone finished or max_duration elapses.

    States are recorded every ``recording_interval`` (which must be at
    least the reference time step); events always carry exact tick
    times. The result is deterministic: the same swarm and scenario give
    a bit-identical trajectory, serial or parallel.
    """
    dt = scenario.reference_time_step
    if recording_interval < dt:
        raise ValueError(
            f"recording_interval {recording_interval} must be >= reference_time_step {dt}")
    record_every = max(1, round(recording_interval / dt))
    n_ticks = max(1, round(scenario.max_duration / dt))

    runs = [_DroneRun(drone=d, state=d.state.copy()) for d in swarm.drones]
    samples: dict[str, list[DroneState]] = {d.id: [] for d in swarm.drones}
    events: list[SimEvent] = []
    active_violations: set[tuple] = set()
    executor = ThreadPoolExecutor(max_workers=len(runs)) if parallel and len(runs) > 1 else None

    # the clock accumulates t += dt exactly as the integrator does, so
    # event times and sample times agree bit for bit
    t = 0.0
    try:
        for tick in range(n_ticks + 1):

            # capture waypoints and retire finished routes at the tick boundary
            for run in runs:
                if run.status != "flying":
                    continue
                route = run.drone.route
                while (run.route_index < len(route)
                       and waypoint_reached(run.state, route[run.route_index], run.drone.gains)):
                    sp = route[run.route_index]
                    events.append(SimEvent(t, WAYPOINT_REACHED, (run.drone.id,), {
                        "waypoint_index": run.route_index,
                        "position": sp.target_position.tolist(),
                    }))
                    run.route_index += 1
                if run.route_index >= len(route):
                    run.status = "complete"
                    hold_position = (route[-1].target_position if route
                                     else run.state.position.copy())
                    hold_yaw = route[-1].target_yaw if route else 0.0
                    run.hold = Setpoint(hold_position, hold_yaw)
                    events.append(SimEvent(t, MISSION_COMPLETE, (run.drone.id,), {
                        "position": run.state.position.tolist(),
                    }))

            if tick % record_every == 0:
                for run in runs:
                    if run.state.t >= t - 0.5 * dt:  # skip drones frozen earlier
                        samples[run.drone.id].append(run.state)

            if tick == n_ticks or all(r.status != "flying" for r in runs):
                break

            # model updates: one writer per drone state, no cross-drone reads
            stepping = [r for r in runs if r.status != "deactivated"]
            if executor is not None:
                outcomes = list(executor.map(
                    lambda r: _step_one(r, scenario, dt), stepping))
            else:
                outcomes = [_step_one(r, scenario, dt) for r in stepping]

            t_next = t + dt
            for run, (new_state, err) in zip(stepping, outcomes):
                if err is not None:
                    run.status = "deactivated"
                    events.append(SimEvent(t_next, DIVERGENCE, (run.drone.id,), {
                        "detail": str(err),
                        "position": run.state.position.tolist(),
                    }))
                    continue
                run.state = new_state
                if new_state.position[2] < 0.0:
                    run.status = "deactivated"
                    events.append(SimEvent(t_next, GROUND_CONTACT, (run.drone.id,), {
                        "position": new_state.position.tolist(),
                    }))

            # interaction checks follow every model update for this tick
            instant = _instant_violations(
                [r.drone.id for r in runs], [r.state.position for r in runs],
                swarm.min_separation, scenario.conditions, t_next)
            current_keys = {_violation_key(e) for e in instant}
            for event in instant:
                if _violation_key(event) not in active_violations:
                    events.append(event)
            active_violations = current_keys
            t = t_next
    finally:
        if executor is not None:
            executor.shutdown(wait=False)

    # flush the last state of drones whose final tick fell between records
    for run in runs:
        recorded = samples[run.drone.id]
        if not recorded or recorded[-1].t < run.state.t:
            recorded.append(run.state)

    return Trajectory(samples=samples, events=events)
