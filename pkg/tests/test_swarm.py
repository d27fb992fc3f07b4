import numpy as np
import pytest

import dronesim as ds

from conftest import build_reference_craft, level_state


def calm_scenario(dt=0.002, max_duration=10.0):
    return ds.Scenario(physics=ds.Physics(), conditions=ds.FlyingConditions(),
                       inertial_frame=ds.InertialFrame(41.1, 16.9, 10.0),
                       reference_time_step=dt, max_duration=max_duration,
                       recording_interval=0.1)


def make_drone(name, position, route=()):
    return ds.Drone(id=name, airframe=build_reference_craft(),
                    state=level_state(*position),
                    gains=ds.ControllerGains(),
                    route=[ds.Setpoint(ds.vec3(*p)) for p in route])


def events_of(trajectory, kind):
    return [e for e in trajectory.events if e.kind == kind]


# --- check_interactions -----------------------------------------------------

def test_far_apart_drones_raise_no_events():
    swarm = ds.Swarm([make_drone("a", (0, 0, 5)), make_drone("b", (10, 0, 5))],
                     min_separation=2.0)
    assert ds.check_interactions(swarm, ds.FlyingConditions(), 0.0) == []


def test_close_pair_emits_one_violation_naming_both():
    swarm = ds.Swarm([make_drone("a", (0, 0, 5)), make_drone("b", (1, 0, 5))],
                     min_separation=2.0)
    events = ds.check_interactions(swarm, ds.FlyingConditions(), 3.0)
    assert len(events) == 1
    event = events[0]
    assert event.kind == "separation_violation"
    assert event.drone_ids == ("a", "b")
    assert event.t == 3.0
    assert event.payload["distance_m"] == pytest.approx(1.0)


def test_three_coincident_drones_give_three_pairs():
    swarm = ds.Swarm([make_drone(n, (0, 0, 5)) for n in ("a", "b", "c")],
                     min_separation=2.0)
    events = ds.check_interactions(swarm, ds.FlyingConditions(), 0.0)
    pairs = {e.drone_ids for e in events}
    assert pairs == {("a", "b"), ("a", "c"), ("b", "c")}


def test_drone_inside_obstacle_is_reported():
    box = ds.Box(ds.vec3(-1, -1, 4), ds.vec3(1, 1, 6))
    swarm = ds.Swarm([make_drone("a", (0, 0, 5))], min_separation=2.0)
    events = ds.check_interactions(swarm, ds.FlyingConditions(obstacles=[box]), 0.0)
    assert [e.kind for e in events] == ["obstacle_collision"]
    assert events[0].drone_ids == ("a",)


# --- simulate ---------------------------------------------------------------

def test_route_at_own_position_completes_at_t0():
    drone = make_drone("a", (1.0, 2.0, 5.0), route=[(1.0, 2.0, 5.0)])
    trajectory = ds.simulate(ds.Swarm([drone]), calm_scenario(), 0.1)
    kinds = [e.kind for e in trajectory.events]
    assert kinds == ["waypoint_reached", "mission_complete"]
    assert all(e.t == 0.0 for e in trajectory.events)
    samples = trajectory.samples["a"]
    assert len(samples) == 1
    assert np.max(np.abs(samples[0].position - [1.0, 2.0, 5.0])) < 1e-3


def test_empty_route_completes_immediately():
    drone = make_drone("a", (0.0, 0.0, 3.0))
    trajectory = ds.simulate(ds.Swarm([drone]), calm_scenario(), 0.1)
    assert [e.kind for e in trajectory.events] == ["mission_complete"]
    assert trajectory.events[0].t == 0.0
    assert len(trajectory.samples["a"]) == 1


def test_finished_drone_station_holds_while_others_fly():
    idle = make_drone("idle", (0.0, 0.0, 5.0))
    busy = make_drone("busy", (30.0, 0.0, 5.0), route=[(36.0, 0.0, 5.0)])
    trajectory = ds.simulate(ds.Swarm([idle, busy]), calm_scenario(max_duration=20.0), 0.1)
    complete = {e.drone_ids[0]: e.t for e in events_of(trajectory, "mission_complete")}
    assert complete["idle"] == 0.0
    assert complete["busy"] > 0.0
    # the idle drone kept station within a millimeter the whole time
    drift = max(float(np.linalg.norm(s.position - [0.0, 0.0, 5.0]))
                for s in trajectory.samples["idle"])
    assert drift < 1e-3
    assert len(trajectory.samples["idle"]) > 1


def test_crossing_drones_emit_separation_violation():
    east = make_drone("east", (-10.0, 0.0, 5.0), route=[(10.0, 0.0, 5.0)])
    west = make_drone("west", (10.0, 0.5, 5.0), route=[(-10.0, 0.5, 5.0)])
    trajectory = ds.simulate(ds.Swarm([east, west], min_separation=2.0),
                             calm_scenario(max_duration=30.0), 0.1)
    violations = events_of(trajectory, "separation_violation")
    assert len(violations) >= 1
    assert violations[0].drone_ids == ("east", "west")
    assert violations[0].payload["distance_m"] < 2.0


def test_violation_episode_emits_single_event():
    # two drones flying closer than the floor for the whole run: one
    # continuous episode, hence exactly one event despite many ticks
    close_a = make_drone("a", (0, 0, 5))
    close_b = make_drone("b", (1, 0, 5), route=[(1.0, 0.0, 7.0)])
    trajectory = ds.simulate(ds.Swarm([close_a, close_b], min_separation=5.0),
                             calm_scenario(max_duration=10.0), 0.1)
    assert len(events_of(trajectory, "separation_violation")) == 1
    assert len(trajectory.samples["b"]) > 10  # genuinely flew for a while


def test_simulation_is_deterministic_and_parallel_matches_serial():
    def run(parallel):
        east = make_drone("east", (-5.0, 0.0, 5.0), route=[(5.0, 0.0, 5.0)])
        west = make_drone("west", (5.0, 0.5, 5.0), route=[(-5.0, 0.5, 5.0)])
        return ds.simulate(ds.Swarm([east, west], min_separation=2.0),
                           calm_scenario(max_duration=15.0), 0.1, parallel=parallel)

    first, second, threaded = run(False), run(False), run(True)
    for reference, candidate in ((first, second), (first, threaded)):
        assert [ (e.t, e.kind, e.drone_ids) for e in reference.events ] == \
               [ (e.t, e.kind, e.drone_ids) for e in candidate.events ]
        for drone_id in reference.samples:
            a, b = reference.samples[drone_id], candidate.samples[drone_id]
            assert len(a) == len(b)
            for sa, sb in zip(a, b):
                assert sa.t == sb.t
                assert np.array_equal(sa.position, sb.position)
                assert np.array_equal(sa.velocity, sb.velocity)
                assert np.array_equal(sa.orientation, sb.orientation)
                assert np.array_equal(sa.angular_velocity, sb.angular_velocity)


def test_all_times_are_tick_multiples_and_increasing():
    dt = 0.002
    drone = make_drone("a", (0.0, 0.0, 5.0), route=[(4.0, 0.0, 5.0)])
    trajectory = ds.simulate(ds.Swarm([drone]), calm_scenario(dt=dt), 0.1)
    for event in trajectory.events:
        assert abs(event.t / dt - round(event.t / dt)) < 1e-6
        assert 0.0 <= event.t <= 10.0
    times = [s.t for s in trajectory.samples["a"]]
    assert all(b > a for a, b in zip(times, times[1:]))
    for t in times:
        assert abs(t / dt - round(t / dt)) < 1e-6


def test_event_stream_is_time_ordered_with_updates_before_checks():
    east = make_drone("east", (-5.0, 0.0, 5.0), route=[(5.0, 0.0, 5.0)])
    west = make_drone("west", (5.0, 0.5, 5.0), route=[(-5.0, 0.5, 5.0)])
    trajectory = ds.simulate(ds.Swarm([east, west], min_separation=2.0),
                             calm_scenario(max_duration=15.0), 0.1)
    times = [e.t for e in trajectory.events]
    assert times == sorted(times)
    # interaction events only ever follow a completed model update,
    # so none may carry t = 0 when the drones start apart
    assert all(e.t > 0.0 for e in events_of(trajectory, "separation_violation"))


def test_ground_contact_deactivates_but_keeps_last_state():
    diver = make_drone("diver", (0.0, 0.0, 2.0), route=[(0.0, 0.0, -8.0)])
    flyer = make_drone("flyer", (20.0, 0.0, 5.0), route=[(24.0, 0.0, 5.0)])
    trajectory = ds.simulate(ds.Swarm([diver, flyer], min_separation=2.0),
                             calm_scenario(max_duration=20.0), 0.1)
    contacts = events_of(trajectory, "ground_contact")
    assert [e.drone_ids for e in contacts] == [("diver",)]
    assert "diver" in trajectory.samples and "flyer" in trajectory.samples
    last = trajectory.samples["diver"][-1]
    assert last.position[2] < 0.0
    assert last.t <= contacts[0].t
    # the other drone still completed its mission
    assert any(e.drone_ids == ("flyer",) for e in events_of(trajectory, "mission_complete"))


def test_divergent_drone_is_isolated():
    bad_state = ds.DroneState(0.0, ds.vec3(0, 0, 5), np.zeros(3),
                              ds.quat_identity(), ds.vec3(0, 0, 1e200))
    bad = ds.Drone("bad", build_reference_craft(), bad_state,
                   ds.ControllerGains(), [ds.Setpoint(ds.vec3(0, 0, 6))])
    good = make_drone("good", (30.0, 0.0, 5.0), route=[(33.0, 0.0, 5.0)])
    trajectory = ds.simulate(ds.Swarm([bad, good], min_separation=2.0),
                             calm_scenario(max_duration=15.0), 0.1)
    assert [e.drone_ids for e in events_of(trajectory, "divergence")] == [("bad",)]
    assert any(e.drone_ids == ("good",) for e in events_of(trajectory, "mission_complete"))
    assert trajectory.samples["bad"][-1].t <= events_of(trajectory, "divergence")[0].t


def test_recording_interval_must_cover_time_step():
    drone = make_drone("a", (0, 0, 5))
    with pytest.raises(ValueError):
        ds.simulate(ds.Swarm([drone]), calm_scenario(dt=0.01), recording_interval=0.001)


def test_swarm_validation():
    with pytest.raises(ValueError):
        ds.Swarm([])
    with pytest.raises(ValueError):
        ds.Swarm([make_drone("x", (0, 0, 0)), make_drone("x", (1, 0, 0))])
    with pytest.raises(ValueError):
        ds.Swarm([make_drone("a", (0, 0, 0))], min_separation=-1.0)
