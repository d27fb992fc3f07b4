"""Deterministic multi-drone flight simulation.

A numpy library that models each drone as a rigid body driven by
individually spinning rotors, plans constrained waypoint routes for a
swarm, flies the routes under a PD cascade controller inside a shared
world scenario, and exports geo-referenced results with error metrics.
"""

from .airframe import (Airframe, Body, ConfigurationError, Rotor, allocate,
                       allocation_matrix, hover_speed, net_wrench, rotor_thrust,
                       set_rotor_speeds)
from .control import (ControllerGains, Setpoint, compute_commands,
                      thrust_and_attitude, waypoint_reached)
from .dynamics import (DEFAULT_TIME_STEP, Derivative, DivergenceError,
                       DroneState, state_derivative, step)
from .export import export_csv, export_geojson, load_csv
from .frames import (EARTH_RADIUS_M, InertialFrame, geo_project, geo_unproject,
                     integrate_orientation, quat_from_axis_angle,
                     quat_from_euler, quat_identity, quat_inverse,
                     quat_multiply, quat_normalize, quat_to_matrix, rotate,
                     vec3)
from .metrics import MetricsReport, compute_rmse
from .routing import (InstanceTooLargeError, Mission, RoutePlan, Waypoint,
                      brute_force_optimize, optimize, route_length)
from .scenario import (Box, EnvironmentSample, FlyingConditions, Physics,
                       Scenario, point_in_box, point_in_obstacle,
                       sample_environment, segment_hits_box,
                       segment_hits_obstacle)
from .scenario_io import (ScenarioError, ScenarioInvariantError,
                          ScenarioParseError, ScenarioSchemaError,
                          bundled_scenario_path, load_scenario, save_scenario,
                          scenario_from_dict, scenario_to_dict)
from .swarm import (SimEvent, Swarm, Trajectory, Drone, check_interactions,
                    simulate)

__version__ = "0.1.0"

__all__ = [
    "Airframe", "Body", "Box", "ConfigurationError", "ControllerGains",
    "DEFAULT_TIME_STEP", "Derivative", "DivergenceError", "Drone",
    "DroneState", "EARTH_RADIUS_M", "EnvironmentSample", "FlyingConditions",
    "InertialFrame", "InstanceTooLargeError", "MetricsReport", "Mission",
    "Physics", "RoutePlan", "Rotor", "Scenario", "ScenarioError",
    "ScenarioInvariantError", "ScenarioParseError", "ScenarioSchemaError",
    "Setpoint", "SimEvent", "Swarm", "Trajectory", "Waypoint", "allocate",
    "allocation_matrix", "brute_force_optimize", "bundled_scenario_path",
    "check_interactions", "compute_commands", "compute_rmse", "export_csv",
    "export_geojson", "geo_project", "geo_unproject", "hover_speed",
    "integrate_orientation", "load_csv", "load_scenario", "net_wrench",
    "optimize", "point_in_box", "point_in_obstacle", "quat_from_axis_angle",
    "quat_from_euler",
    "quat_identity", "quat_inverse", "quat_multiply", "quat_normalize",
    "quat_to_matrix", "rotate", "rotor_thrust", "route_length",
    "sample_environment", "save_scenario", "scenario_from_dict",
    "scenario_to_dict", "segment_hits_box", "segment_hits_obstacle",
    "set_rotor_speeds", "simulate", "state_derivative", "step",
    "thrust_and_attitude", "vec3", "waypoint_reached",
]
