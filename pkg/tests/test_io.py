import json
import math

import numpy as np
import pytest

import dronesim as ds

from conftest import assert_strict_geojson, level_state


def load_fixture_dict(name):
    return json.loads(ds.bundled_scenario_path(name).read_text())


def write_scenario(tmp_path, data, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


# --- load_scenario ----------------------------------------------------------

def test_hover_fixture_loads():
    swarm, scenario, mission = ds.load_scenario(ds.bundled_scenario_path("hover.json"))
    assert [d.id for d in swarm.drones] == ["alpha"]
    drone = swarm.drones[0]
    assert drone.airframe.body.mass == 1.0
    assert len(drone.airframe.rotors) == 4
    assert scenario.reference_time_step == 0.001
    assert mission.waypoints == []


def test_negative_mass_names_field_path(tmp_path):
    data = load_fixture_dict("hover.json")
    data["drones"][0]["body"]["mass"] = -1.0
    with pytest.raises(ds.ScenarioInvariantError) as excinfo:
        ds.load_scenario(write_scenario(tmp_path, data))
    assert excinfo.value.path == "drones[0].body.mass"
    assert "drones[0].body.mass" in str(excinfo.value)


def test_unknown_top_level_key_rejected(tmp_path):
    data = load_fixture_dict("hover.json")
    data["unexpected_section"] = {}
    with pytest.raises(ds.ScenarioSchemaError) as excinfo:
        ds.load_scenario(write_scenario(tmp_path, data))
    assert "unexpected_section" in str(excinfo.value)


def test_unknown_nested_key_rejected(tmp_path):
    data = load_fixture_dict("hover.json")
    data["drones"][0]["body"]["weight"] = 1.0
    with pytest.raises(ds.ScenarioSchemaError):
        ds.load_scenario(write_scenario(tmp_path, data))


def test_parse_errors_are_distinct(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ds.ScenarioParseError):
        ds.load_scenario(path)
    with pytest.raises(ds.ScenarioParseError):
        ds.load_scenario(tmp_path / "missing.json")


def test_schema_violation_reports_path(tmp_path):
    data = load_fixture_dict("hover.json")
    data["drones"][0]["rotors"] = data["drones"][0]["rotors"][:1]  # below minItems
    with pytest.raises(ds.ScenarioSchemaError) as excinfo:
        ds.load_scenario(write_scenario(tmp_path, data))
    assert "rotors" in excinfo.value.path


def test_mismatched_reference_time_step_rejected(tmp_path):
    data = load_fixture_dict("hover.json")
    data["simulation"]["reference_time_step"] = 0.01  # dt is 0.001
    with pytest.raises(ds.ScenarioInvariantError) as excinfo:
        ds.load_scenario(write_scenario(tmp_path, data))
    assert excinfo.value.path == "simulation.reference_time_step"


def test_duplicate_waypoint_id_names_path(tmp_path):
    data = load_fixture_dict("square_route.json")
    data["mission"]["waypoints"][1]["id"] = data["mission"]["waypoints"][0]["id"]
    with pytest.raises(ds.ScenarioInvariantError) as excinfo:
        ds.load_scenario(write_scenario(tmp_path, data))
    assert excinfo.value.path == "mission.waypoints[1].id"


def test_non_unit_start_orientation_rejected(tmp_path):
    data = load_fixture_dict("hover.json")
    data["drones"][0]["start"]["orientation"] = [1.0, 1.0, 0.0, 0.0]
    with pytest.raises(ds.ScenarioInvariantError) as excinfo:
        ds.load_scenario(write_scenario(tmp_path, data))
    assert excinfo.value.path == "drones[0].start.orientation"


@pytest.mark.parametrize("name", ["hover.json", "square_route.json",
                                  "two_drone_cross.json"])
def test_serialize_load_round_trip_is_idempotent(name, tmp_path):
    first = ds.load_scenario(ds.bundled_scenario_path(name))
    doc_one = ds.scenario_to_dict(*first)
    ds.save_scenario(tmp_path / "copy.json", *first)
    second = ds.load_scenario(tmp_path / "copy.json")
    doc_two = ds.scenario_to_dict(*second)
    assert doc_one == doc_two


# --- GeoJSON export ---------------------------------------------------------

def stationary_trajectory(n=4, position=(0.0, 0.0, 0.0)):
    samples = [level_state(*position, t=0.1 * i) for i in range(n)]
    return ds.Trajectory(samples={"alpha": samples}, events=[])


def test_stationary_drone_exports_constant_linestring(tmp_path):
    frame = ds.InertialFrame(10.0, 20.0, 100.0)
    out = tmp_path / "track.geojson"
    ds.export_geojson(stationary_trajectory(), frame, out)
    document = json.loads(out.read_text())
    assert_strict_geojson(document)
    feature = document["features"][0]
    assert feature["geometry"]["type"] == "LineString"
    coords = feature["geometry"]["coordinates"]
    assert len(coords) == 4
    assert all(c == [20.0, 10.0, 100.0] for c in coords)
    assert feature["properties"]["drone_id"] == "alpha"
    assert feature["properties"]["times_s"] == [0.0, 0.1, 0.2, 0.30000000000000004]


def test_northward_displacement_exports_one_degree_latitude(tmp_path):
    frame = ds.InertialFrame(0.0, 0.0, 0.0)
    states = [level_state(0.0, 0.0, 0.0, t=0.0),
              level_state(0.0, 111_194.9, 0.0, t=1.0)]
    trajectory = ds.Trajectory(samples={"alpha": states}, events=[])
    out = tmp_path / "north.geojson"
    ds.export_geojson(trajectory, frame, out)
    document = json.loads(out.read_text())
    assert_strict_geojson(document)
    final = document["features"][0]["geometry"]["coordinates"][-1]
    assert final[1] == pytest.approx(1.0, abs=1e-6)


def test_single_sample_degenerates_to_point(tmp_path):
    frame = ds.InertialFrame(0.0, 0.0, 0.0)
    out = tmp_path / "point.geojson"
    ds.export_geojson(stationary_trajectory(n=1), frame, out)
    document = json.loads(out.read_text())
    assert_strict_geojson(document)
    assert document["features"][0]["geometry"]["type"] == "Point"


def test_events_become_point_features(tmp_path):
    trajectory = stationary_trajectory()
    trajectory.events.append(ds.SimEvent(0.2, "separation_violation", ("alpha", "bravo"),
                                         {"distance_m": 1.0, "position": [0.0, 0.0, 0.0]}))
    out = tmp_path / "events.geojson"
    ds.export_geojson(trajectory, ds.InertialFrame(0.0, 0.0, 0.0), out)
    document = json.loads(out.read_text())
    assert_strict_geojson(document)
    markers = [f for f in document["features"]
               if f["properties"].get("event") == "separation_violation"]
    assert len(markers) == 1
    assert markers[0]["properties"]["drone_ids"] == ["alpha", "bravo"]
    assert markers[0]["geometry"]["type"] == "Point"


def test_empty_trajectory_export_refuses_and_creates_nothing(tmp_path):
    out = tmp_path / "nothing.geojson"
    with pytest.raises(ValueError):
        ds.export_geojson(ds.Trajectory(samples={}, events=[]),
                          ds.InertialFrame(0.0, 0.0, 0.0), out)
    assert not out.exists()
    with pytest.raises(ValueError):
        ds.export_csv(ds.Trajectory(samples={}, events=[]), tmp_path / "nothing.csv")
    assert not (tmp_path / "nothing.csv").exists()


# --- CSV export -------------------------------------------------------------

def test_csv_has_header_plus_row_per_sample(tmp_path):
    out = tmp_path / "track.csv"
    ds.export_csv(stationary_trajectory(n=3), out)
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 4
    assert lines[0] == "drone_id,t,px,py,pz,vx,vy,vz,qw,qx,qy,qz,wx,wy,wz"


def test_csv_round_trip_within_formatting_precision(tmp_path):
    rng = np.random.default_rng(61)
    states = []
    for i in range(5):
        q = ds.quat_normalize(rng.normal(size=4))
        states.append(ds.DroneState(t=0.1 * i, position=rng.uniform(-100, 100, 3),
                                    velocity=rng.uniform(-10, 10, 3), orientation=q,
                                    angular_velocity=rng.uniform(-2, 2, 3)))
    trajectory = ds.Trajectory(samples={"alpha": states}, events=[])
    out = tmp_path / "rt.csv"
    ds.export_csv(trajectory, out)
    loaded = ds.load_csv(out)
    assert list(loaded.samples) == ["alpha"]
    for original, parsed in zip(states, loaded.samples["alpha"]):
        assert parsed.t == pytest.approx(original.t, rel=1e-8, abs=1e-12)
        for attr in ("position", "velocity", "orientation", "angular_velocity"):
            assert np.allclose(getattr(parsed, attr), getattr(original, attr),
                               rtol=1e-8, atol=1e-12)


def test_csv_groups_rows_by_drone_not_time(tmp_path):
    older = [level_state(1.0, 0.0, 0.0, t=0.0), level_state(1.0, 0.0, 0.0, t=0.4)]
    newer = [level_state(2.0, 0.0, 0.0, t=0.2)]
    trajectory = ds.Trajectory(samples={"bravo": older, "alpha": newer}, events=[])
    out = tmp_path / "grouped.csv"
    ds.export_csv(trajectory, out)
    ids = [line.split(",")[0] for line in out.read_text().strip().splitlines()[1:]]
    assert ids == ["alpha", "bravo", "bravo"]


def test_csv_uses_nine_significant_digits(tmp_path):
    state = ds.DroneState(t=0.123456789123, position=ds.vec3(1234.56789123, 0, 0),
                          velocity=np.zeros(3), orientation=ds.quat_identity(),
                          angular_velocity=np.zeros(3))
    out = tmp_path / "digits.csv"
    ds.export_csv(ds.Trajectory(samples={"a": [state]}, events=[]), out)
    row = out.read_text().strip().splitlines()[1].split(",")
    assert row[1] == "0.123456789"
    assert row[2] == "1234.56789"


# --- metrics ----------------------------------------------------------------

def straight_reference():
    return {"alpha": [ds.Setpoint(ds.vec3(0, 0, 0)), ds.Setpoint(ds.vec3(10, 0, 0))]}


def test_rmse_zero_for_trajectory_on_the_polyline():
    states = [level_state(x, 0.0, 0.0, t=0.1 * i) for i, x in enumerate([0.0, 2.5, 7.5, 10.0])]
    report = ds.compute_rmse(ds.Trajectory(samples={"alpha": states}, events=[]),
                             straight_reference())
    assert report.rmse_m["alpha"] == 0.0


def test_rmse_constant_one_meter_offset():
    states = [level_state(x, 1.0, 0.0, t=0.1 * i) for i, x in enumerate([1.0, 4.0, 6.0, 9.0])]
    report = ds.compute_rmse(ds.Trajectory(samples={"alpha": states}, events=[]),
                             straight_reference())
    assert report.rmse_m["alpha"] == pytest.approx(1.0, abs=1e-9)


def test_rmse_alternating_offsets_average_to_one():
    offsets = [1.0, -1.0, 1.0, -1.0]
    states = [level_state(2.0 * i + 1.0, off, 0.0, t=0.1 * i)
              for i, off in enumerate(offsets)]
    report = ds.compute_rmse(ds.Trajectory(samples={"alpha": states}, events=[]),
                             straight_reference())
    assert report.rmse_m["alpha"] == pytest.approx(1.0, abs=1e-9)


def test_rmse_invariant_under_collinear_densification():
    states = [level_state(x, 0.7, 0.3, t=0.1 * i) for i, x in enumerate([0.5, 3.5, 8.0])]
    trajectory = ds.Trajectory(samples={"alpha": states}, events=[])
    sparse = ds.compute_rmse(trajectory, straight_reference())
    dense_reference = {"alpha": [ds.Setpoint(ds.vec3(x, 0, 0))
                                 for x in (0.0, 2.0, 4.0, 5.0, 6.5, 10.0)]}
    dense = ds.compute_rmse(trajectory, dense_reference)
    assert dense.rmse_m["alpha"] == pytest.approx(sparse.rmse_m["alpha"], rel=1e-12)


def test_rmse_missing_reference_is_reported_and_skipped():
    states = [level_state(0.0, 0.0, 0.0, t=0.0)]
    trajectory = ds.Trajectory(samples={"alpha": states, "ghost": states}, events=[])
    report = ds.compute_rmse(trajectory, straight_reference())
    assert report.skipped_drones == ["ghost"]
    assert "ghost" not in report.rmse_m
    assert "alpha" in report.rmse_m


def test_metrics_collect_capture_times_and_event_counts():
    states = [level_state(0.0, 0.0, 0.0, t=0.0)]
    events = [ds.SimEvent(1.5, "waypoint_reached", ("alpha",), {}),
              ds.SimEvent(3.0, "waypoint_reached", ("alpha",), {}),
              ds.SimEvent(3.0, "separation_violation", ("alpha", "bravo"), {})]
    report = ds.compute_rmse(ds.Trajectory(samples={"alpha": states}, events=events),
                             straight_reference())
    assert report.waypoint_capture_times_s["alpha"] == [1.5, 3.0]
    assert report.event_counts == {"waypoint_reached": 2, "separation_violation": 1}


def test_flown_length_sums_sample_legs():
    states = [level_state(0, 0, 0, t=0.0), level_state(3, 4, 0, t=0.1),
              level_state(3, 4, 12, t=0.2)]
    report = ds.compute_rmse(ds.Trajectory(samples={"alpha": states}, events=[]),
                             straight_reference())
    assert report.route_length_flown_m["alpha"] == pytest.approx(17.0, abs=1e-12)
