"""Waypoint assignment and per-drone visit ordering.

Routes are open paths (start through all assigned waypoints, no return
leg) scored by Euclidean length. The planner is a self-contained
heuristic chosen to be verifiable against exhaustive search at desk
scale:

* assignment: angular sweep around the centroid of the drone start
  positions, contiguous arcs balanced to within one waypoint;
* ordering: nearest-neighbor construction (one run from the drone start
  plus one anchored restart per waypoint), each descended with
  interleaved 2-opt segment reversals and 1-3 waypoint block
  relocations until no move improves; the shortest result wins. Every
  returned route is 2-opt locally optimal.
* feasibility: a plan is flagged infeasible (never repaired) when a
  drone's route exceeds its length budget or a leg crosses an obstacle.

All tie-breaks use lexicographic waypoint id order, so the planner is a
pure function of the mission, including list order.

``brute_force_optimize`` enumerates every assignment and permutation
within a small instance guard; it exists as the exact reference the
heuristic is tested against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .airframe import ConfigurationError
from .frames import as_vec3
from .scenario import Box, segment_hits_box


class InstanceTooLargeError(ValueError):
    """Exhaustive search was asked for an instance outside its guard."""


@dataclass
class Waypoint:
    id: str
    position: np.ndarray
    label: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("waypoint id must be non-empty")
        self.position = as_vec3(self.position, f"waypoint {self.id!r} position")


@dataclass
class Mission:
    """Waypoints to cover, where each drone starts, and the constraints."""

    waypoints: list[Waypoint]
    start_positions: list[np.ndarray]
    max_route_length: float
    obstacles: list[Box] = field(default_factory=list)

    def __post_init__(self):
        ids = [w.id for w in self.waypoints]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"waypoint ids must be unique, duplicated: {dup}")
        self.start_positions = [as_vec3(p, "start position") for p in self.start_positions]
        if not self.max_route_length > 0.0:
            raise ValueError(f"max_route_length must be > 0, got {self.max_route_length}")


@dataclass
class RoutePlan:
    """Ordered waypoint ids per drone with lengths and feasibility flags."""

    routes: list[list[str]]
    lengths: list[float]
    total_length: float
    feasible: bool
    violations: list[str] = field(default_factory=list)


def route_length(start, ordered: list[Waypoint]) -> float:
    """Length of the open path start -> w1 -> ... -> wn."""
    prev = as_vec3(start, "start")
    total = 0.0
    for w in ordered:
        d = w.position - prev
        total += math.sqrt(d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
        prev = w.position
    return total


def _dist(a, b) -> float:
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


def _sweep_partition(mission: Mission) -> list[list[Waypoint]]:
    """Contiguous angular arcs around the start centroid, sizes within one."""
    n = len(mission.start_positions)
    wps = mission.waypoints
    if n == 1:
        return [list(wps)]
    centroid = np.mean(np.array(mission.start_positions), axis=0)
    by_angle = sorted(
        wps, key=lambda w: (math.atan2(w.position[1] - centroid[1],
                                       w.position[0] - centroid[0]), w.id))
    # drones claim arcs in the order of their own bearing from the centroid
    drone_order = sorted(
        range(n), key=lambda i: (math.atan2(mission.start_positions[i][1] - centroid[1],
                                            mission.start_positions[i][0] - centroid[0]), i))
    base, extra = divmod(len(wps), n)
    chunks: list[list[Waypoint]] = []
    cursor = 0
    for j in range(n):
        size = base + (1 if j < extra else 0)
        chunks.append(by_angle[cursor:cursor + size])
        cursor += size
    assigned: list[list[Waypoint]] = [[] for _ in range(n)]
    for j, drone_idx in enumerate(drone_order):
        assigned[drone_idx] = chunks[j]
    return assigned


def _nearest_neighbor(start, wps: list[Waypoint],
                      first: Waypoint | None = None) -> list[Waypoint]:
    """Greedy construction, optionally anchored on a forced first visit."""
    remaining = sorted(wps, key=lambda w: w.id)
    route: list[Waypoint] = []
    current = start
    if first is not None:
        remaining.remove(first)
        route.append(first)
        current = first.position
    while remaining:
        best = min(remaining, key=lambda w: (_dist(current, w.position), w.id))
        remaining.remove(best)
        route.append(best)
        current = best.position
    return route


def _two_opt(start, route: list[Waypoint]) -> list[Waypoint]:
    """Reverse-segment descent on an open path until no move improves it."""
    route = list(route)
    k = len(route)
    if k < 2:
        return route
    improved = True
    while improved:
        improved = False
        for i in range(k - 1):
            prev = start if i == 0 else route[i - 1].position
            for j in range(i + 1, k):
                # reversing route[i..j] only swaps the two boundary legs;
                # the final leg is absent because the path does not close
                old = _dist(prev, route[i].position)
                new = _dist(prev, route[j].position)
                if j < k - 1:
                    after = route[j + 1].position
                    old += _dist(route[j].position, after)
                    new += _dist(route[i].position, after)
                if new < old - 1e-12:
                    route[i:j + 1] = reversed(route[i:j + 1])
                    improved = True
    return route


def _or_opt(start, route: list[Waypoint]) -> list[Waypoint]:
    """Relocate blocks of 1-3 consecutive waypoints while that shortens."""
    route = list(route)
    improved = True
    while improved:
        improved = False
        k = len(route)
        for size in (1, 2, 3):
            if size >= k:
                break
            for i in range(k - size + 1):
                block = route[i:i + size]
                rest = route[:i] + route[i + size:]
                prev = start if i == 0 else route[i - 1].position
                removal_gain = _dist(prev, block[0].position)
                if i + size < k:
                    after = route[i + size].position
                    removal_gain += _dist(block[-1].position, after) - _dist(prev, after)
                for j in range(len(rest) + 1):
                    if j == i:
                        continue
                    ins_prev = start if j == 0 else rest[j - 1].position
                    insertion_cost = _dist(ins_prev, block[0].position)
                    if j < len(rest):
                        nxt = rest[j].position
                        insertion_cost += _dist(block[-1].position, nxt) - _dist(ins_prev, nxt)
                    if insertion_cost < removal_gain - 1e-12:
                        route = rest[:j] + block + rest[j:]
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
    return route


def _order_route(start, wps: list[Waypoint]) -> list[Waypoint]:
    """Best route over the multi-start descents, ids breaking length ties."""
    if len(wps) < 2:
        return list(wps)
    candidates = [_nearest_neighbor(start, wps)]
    candidates += [_nearest_neighbor(start, wps, first=w)
                   for w in sorted(wps, key=lambda w: w.id)]
    best_key: tuple | None = None
    best_route: list[Waypoint] | None = None
    for candidate in candidates:
        route = _two_opt(start, candidate)
        while True:
            relocated = _two_opt(start, _or_opt(start, route))
            if [w.id for w in relocated] == [w.id for w in route]:
                break
            route = relocated
        key = (route_length(start, route), tuple(w.id for w in route))
        if best_key is None or key < best_key:
            best_key = key
            best_route = route
    assert best_route is not None
    return best_route


def _leg_violations(mission: Mission, drone_idx: int, route: list[Waypoint]) -> list[str]:
    found = []
    prev = mission.start_positions[drone_idx]
    prev_name = "start"
    for w in route:
        for b, box in enumerate(mission.obstacles):
            if segment_hits_box(box, prev, w.position):
                found.append(
                    f"drone {drone_idx}: leg {prev_name} -> {w.id} crosses obstacle {b}")
                break
        prev = w.position
        prev_name = w.id
    return found


def _finish_plan(mission: Mission, routes: list[list[Waypoint]]) -> RoutePlan:
    lengths = [route_length(mission.start_positions[i], r) for i, r in enumerate(routes)]
    violations: list[str] = []
    for i, (r, length) in enumerate(zip(routes, lengths)):
        if length > mission.max_route_length:
            violations.append(
                f"drone {i}: route length {length:.3f} m exceeds budget "
                f"{mission.max_route_length:.3f} m")
        violations.extend(_leg_violations(mission, i, r))
    return RoutePlan(
        routes=[[w.id for w in r] for r in routes],
        lengths=lengths,
        total_length=float(sum(lengths)),
        feasible=not violations,
        violations=violations,
    )


def optimize(mission: Mission) -> RoutePlan:
    """Sweep-partition the waypoints, then locally optimize each route.

    Deterministic given the mission (including list order); every route
    in the result is 2-opt locally optimal. Raises ConfigurationError
    for a mission with no drones; an empty waypoint set yields a trivial
    feasible plan.
    """
    n = len(mission.start_positions)
    if n == 0:
        raise ConfigurationError("mission has no drones")
    if not mission.waypoints:
        return RoutePlan(routes=[[] for _ in range(n)], lengths=[0.0] * n,
                         total_length=0.0, feasible=True, violations=[])
    assigned = _sweep_partition(mission)
    routes = [_order_route(mission.start_positions[i], assigned[i]) for i in range(n)]
    return _finish_plan(mission, routes)


# guard bounds for the exhaustive reference solver
_BRUTE_FORCE_LIMITS = {1: 9, 2: 6}


def brute_force_optimize(mission: Mission) -> RoutePlan:
    """Exact minimum-total-length plan by enumerating assignments and orders.

    Guarded to at most 9 waypoints for one drone and 6 for two; larger
    instances raise InstanceTooLargeError. Among feasible plans the
    global optimum is returned; if no plan is feasible, the shortest
    plan is returned flagged infeasible.
    """
    n = len(mission.start_positions)
    if n == 0:
        raise ConfigurationError("mission has no drones")
    wps = sorted(mission.waypoints, key=lambda w: w.id)
    count = len(wps)
    if count == 0:
        return RoutePlan(routes=[[] for _ in range(n)], lengths=[0.0] * n,
                         total_length=0.0, feasible=True, violations=[])
    limit = _BRUTE_FORCE_LIMITS.get(n)
    if limit is None or count > limit:
        raise InstanceTooLargeError(
            f"exhaustive search supports up to "
            f"{', '.join(f'{v} waypoints for {k} drone(s)' for k, v in _BRUTE_FORCE_LIMITS.items())}; "
            f"got {count} waypoints for {n} drone(s)")

    positions = [w.position for w in wps]
    starts = mission.start_positions
    dist = [[_dist(a, b) for b in positions] for a in positions]
    start_dist = [[_dist(s, p) for p in positions] for s in starts]
    obstacles = mission.obstacles
    if obstacles:
        leg_blocked = [[any(segment_hits_box(box, positions[i], positions[j])
                            for box in obstacles) for j in range(count)]
                       for i in range(count)]
        start_blocked = [[any(segment_hits_box(box, starts[d], positions[j])
                              for box in obstacles) for j in range(count)]
                         for d in range(n)]

    def splits(total: int):
        # all ways to cut a permutation into n consecutive (possibly
        # empty) segments, one per drone
        if n == 1:
            yield (total,)
        else:
            for cut in range(total + 1):
                yield (cut, total - cut)

    best_key: tuple | None = None
    best_pick: tuple | None = None
    for perm in itertools.permutations(range(count)):
        for sizes in splits(count):
            total = 0.0
            feasible = True
            cursor = 0
            for drone_idx, size in enumerate(sizes):
                if size == 0:
                    continue
                first = perm[cursor]
                length = start_dist[drone_idx][first]
                if obstacles and start_blocked[drone_idx][first]:
                    feasible = False
                for k in range(cursor, cursor + size - 1):
                    length += dist[perm[k]][perm[k + 1]]
                    if obstacles and leg_blocked[perm[k]][perm[k + 1]]:
                        feasible = False
                cursor += size
                if length > mission.max_route_length:
                    feasible = False
                total += length
            # prefer feasible plans, then total length; strict < keeps the
            # first plan in enumeration order on ties
            key = (0 if feasible else 1, total)
            if best_key is None or key < best_key:
                best_key = key
                best_pick = (perm, sizes)
    assert best_pick is not None
    perm, sizes = best_pick
    best_routes = []
    cursor = 0
    for size in sizes:
        best_routes.append([wps[perm[k]] for k in range(cursor, cursor + size)])
        cursor += size
    return _finish_plan(mission, best_routes)
