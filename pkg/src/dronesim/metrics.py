"""Flight quality metrics against the planned reference routes.

The headline metric is the root mean square error of the flown samples
against the reference polyline: for every recorded position, the
distance to the nearest point anywhere on the polyline (not just its
vertices), squared, averaged, and rooted. Nearest-point matching is used
because planned routes carry no timestamps to align against, and it
makes the metric invariant under densifying the reference with collinear
vertices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .control import Setpoint
from .swarm import WAYPOINT_REACHED, Trajectory


@dataclass
class MetricsReport:
    """Per-drone flight metrics plus swarm-wide event counts."""

    rmse_m: dict[str, float] = field(default_factory=dict)
    route_length_flown_m: dict[str, float] = field(default_factory=dict)
    waypoint_capture_times_s: dict[str, list[float]] = field(default_factory=dict)
    event_counts: dict[str, int] = field(default_factory=dict)
    skipped_drones: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rmse_m": self.rmse_m,
            "route_length_flown_m": self.route_length_flown_m,
            "waypoint_capture_times_s": self.waypoint_capture_times_s,
            "event_counts": self.event_counts,
            "skipped_drones": self.skipped_drones,
        }


def point_segment_distance(p, a, b) -> float:
    """Distance from point p to the closed segment [a, b]."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        d = p - a
    else:
        t = min(1.0, max(0.0, float((p - a) @ ab) / denom))
        d = p - (a + t * ab)
    return math.sqrt(float(d @ d))


def point_polyline_distance(p, vertices: list[np.ndarray]) -> float:
    """Distance from p to the nearest point on the polyline through vertices."""
    if not vertices:
        raise ValueError("polyline needs at least one vertex")
    if len(vertices) == 1:
        return point_segment_distance(p, vertices[0], vertices[0])
    return min(point_segment_distance(p, vertices[i], vertices[i + 1])
               for i in range(len(vertices) - 1))


def compute_rmse(trajectory: Trajectory,
                 reference: dict[str, list[Setpoint]]) -> MetricsReport:
    """Build the metrics report for a flown trajectory.

    ``reference`` maps drone id to its ordered setpoint list. Drones
    present in the trajectory but missing (or empty) in the reference are
    listed in ``skipped_drones`` and excluded from the RMSE table.
    """
    report = MetricsReport()
    for event in trajectory.events:
        report.event_counts[event.kind] = report.event_counts.get(event.kind, 0) + 1
        if event.kind == WAYPOINT_REACHED:
            for drone_id in event.drone_ids:
                report.waypoint_capture_times_s.setdefault(drone_id, []).append(event.t)

    for drone_id, states in trajectory.samples.items():
        positions = [s.position for s in states]
        flown = 0.0
        for i in range(len(positions) - 1):
            delta = positions[i + 1] - positions[i]
            flown += math.sqrt(float(delta @ delta))
        report.route_length_flown_m[drone_id] = flown

        setpoints = reference.get(drone_id)
        if not setpoints:
            report.skipped_drones.append(drone_id)
            continue
        vertices = [sp.target_position for sp in setpoints]
        squared = [point_polyline_distance(p, vertices) ** 2 for p in positions]
        report.rmse_m[drone_id] = math.sqrt(sum(squared) / len(squared)) if squared else 0.0
    return report
