import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from usv_mission.scenario import ParseError, load_scenario, parse_scenario
from usv_mission.world import (
    Bounds,
    CircleObstacle,
    Point2,
    PolygonObstacle,
    ValidationError,
    WorldState,
    approach_point,
    distance,
    is_collision_free,
    segment_is_free,
    wrap_angle,
)

from conftest import station

coords = st.floats(-1e3, 1e3, allow_nan=False)
points = st.builds(Point2, coords, coords)


@pytest.mark.parametrize(
    "a, b, expected",
    [((0, 0), (0, 0), 0.0), ((0, 0), (3, 4), 5.0), ((-1, 2), (2, -2), 5.0)],
)
def test_distance_examples(a, b, expected):
    assert distance(Point2(*a), Point2(*b)) == expected


@given(points, points, points)
def test_distance_metric_properties(a, b, c):
    assert distance(a, b) == distance(b, a) >= 0.0
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9


def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        Point2(math.nan, 0.0)
    with pytest.raises(ValueError):
        Point2(0.0, math.inf)


@given(st.floats(-100, 100, allow_nan=False))
def test_wrap_angle_range(a):
    w = wrap_angle(a)
    assert -math.pi <= w < math.pi
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-9)


def test_wrap_angle_pi_maps_to_minus_pi():
    assert wrap_angle(math.pi) == -math.pi
    assert wrap_angle(-math.pi) == -math.pi


def test_collision_free_examples(open_water):
    assert is_collision_free(Point2(1.0, 2.0), open_water, 1.0)
    world = WorldState(Bounds(-50, -50, 50, 50), obstacles=(CircleObstacle(Point2(5.0, 0.0), 3.0),))
    assert not is_collision_free(Point2(5.0, 0.0), world, 0.0)
    # exactly radius + clearance away: boundary is free
    assert is_collision_free(Point2(5.0, 4.5), world, 1.5)
    assert not is_collision_free(Point2(5.0, 4.49), world, 1.5)


def test_collision_free_outside_bounds(open_water):
    assert not is_collision_free(Point2(60.0, 0.0), open_water, 0.0)
    assert is_collision_free(Point2(50.0, 50.0), open_water, 0.0)


def test_station_footprint_is_solid():
    world = WorldState(Bounds(-20, -20, 20, 20), stations=(station("ds_1", 0.0, 0.0, 0.0, l=4.0, w=2.0),))
    assert not is_collision_free(Point2(0.0, 0.0), world, 0.0)
    assert not is_collision_free(Point2(1.9, 0.9), world, 0.0)
    assert is_collision_free(Point2(3.0, 0.0), world, 1.0)
    assert not is_collision_free(Point2(2.9, 0.0), world, 1.0)


def test_polygon_obstacle_distance():
    square = PolygonObstacle((Point2(0, 0), Point2(2, 0), Point2(2, 2), Point2(0, 2)))
    world = WorldState(Bounds(-10, -10, 10, 10), obstacles=(square,))
    assert not is_collision_free(Point2(1, 1), world, 0.0)
    assert is_collision_free(Point2(3, 1), world, 1.0)
    assert not is_collision_free(Point2(2.5, 1), world, 1.0)
    # diagonal distance to a corner
    assert is_collision_free(Point2(3, 3), world, math.sqrt(2))


def test_segment_is_free_detects_crossing():
    world = WorldState(Bounds(-10, -10, 20, 10), obstacles=(CircleObstacle(Point2(5, 0), 1.0),))
    assert not segment_is_free(Point2(0, 0), Point2(10, 0), world, 0.0)
    assert segment_is_free(Point2(0, 2.5), Point2(10, 2.5), world, 1.5)
    assert not segment_is_free(Point2(0, 2.4), Point2(10, 2.4), world, 1.5)
    sq = PolygonObstacle((Point2(4, -1), Point2(6, -1), Point2(6, 1), Point2(4, 1)))
    world = WorldState(Bounds(-10, -10, 20, 10), obstacles=(sq,))
    assert not segment_is_free(Point2(0, 0), Point2(10, 0), world, 0.0)
    assert not segment_is_free(Point2(5, -5), Point2(5, 5), world, 0.0)
    assert segment_is_free(Point2(0, 2), Point2(10, 2), world, 1.0)


circles = st.builds(
    CircleObstacle,
    st.builds(Point2, st.floats(-30, 30), st.floats(-30, 30)),
    st.floats(0.5, 8.0),
)


@given(st.lists(circles, max_size=4), st.builds(Point2, st.floats(-40, 40), st.floats(-40, 40)),
       st.floats(0, 10), st.floats(0, 10))
def test_collision_free_monotone_in_clearance(obstacles, p, c1, c2):
    world = WorldState(Bounds(-40, -40, 40, 40), obstacles=tuple(obstacles))
    lo, hi = sorted((c1, c2))
    if is_collision_free(p, world, hi):
        assert is_collision_free(p, world, lo)


def test_approach_point_examples():
    p, h = approach_point(station("ds", 10.0, 0.0, 0.0), 5.0)
    assert (p.x, p.y, h) == (5.0, 0.0, 0.0)
    p, h = approach_point(station("ds", 0.0, 0.0, math.pi / 2), 4.0)
    assert math.isclose(p.x, 0.0, abs_tol=1e-12) and p.y == -4.0 and h == math.pi / 2


@given(
    st.floats(-math.pi, math.pi, exclude_max=True),
    st.floats(0.5, 5.0),
    st.floats(0.5, 5.0),
    st.floats(0.01, 10.0),
)
def test_approach_point_clear_of_own_footprint(heading, l, w, extra):
    s = station("ds", 0.0, 0.0, heading, l=l, w=w)
    standoff = max(l, w) / 2 + extra
    p, _ = approach_point(s, standoff)
    world = WorldState(Bounds(-100, -100, 100, 100), stations=(s,))
    assert is_collision_free(p, world, 0.0)


# --- scenario loading ---------------------------------------------------------


def _doc(**overrides):
    doc = {
        "format_version": 1,
        "bounds": {"xmin": 0, "ymin": 0, "xmax": 100, "ymax": 100},
        "stations": [
            {"id": f"ds_{i}", "x": x, "y": y, "l": 4, "w": 2, "h": 2, "approach_heading": 0.0}
            for i, (x, y) in enumerate([(90, 10), (90, 40), (90, 70), (50, 50)], start=1)
        ],
        "vessel": {"initial": {"x": 10, "y": 10, "psi": 0}},
        "mission": {"structured": "visit_all"},
    }
    doc.update(overrides)
    return doc


def test_parse_scenario_round_trip():
    sc = parse_scenario(_doc())
    assert sc.world.station_ids == ("ds_1", "ds_2", "ds_3", "ds_4")
    assert sc.world.station("ds_2").position == Point2(90.0, 40.0)
    assert sc.initial_state.x == 10.0 and sc.initial_state.t == 0.0
    assert sc.mission.raw_text == "Inspect all port terminals and record data."


def test_duplicate_station_id_rejected():
    doc = _doc()
    doc["stations"][2]["id"] = "ds_1"
    with pytest.raises(ValidationError, match="ds_1") as exc:
        parse_scenario(doc)
    assert exc.value.path == "stations[2].id"


def test_station_outside_bounds_rejected():
    doc = _doc()
    doc["stations"][0]["x"] = 150
    with pytest.raises(ValidationError, match="outside bounds"):
        parse_scenario(doc)


def test_overlapping_footprints_rejected():
    doc = _doc()
    doc["stations"][1]["y"] = 11.0
    with pytest.raises(ValidationError, match="overlaps"):
        parse_scenario(doc)


def test_standoff_inside_footprint_rejected():
    doc = _doc(executor={"standoff": 1.5})
    with pytest.raises(ValidationError, match="standoff"):
        parse_scenario(doc)


@pytest.mark.parametrize(
    "mutate, where",
    [
        (lambda d: d["stations"][0].update(l=0), "stations[0].length"),
        (lambda d: d["stations"][0].update(approach_heading=4.0), "stations[0].approach_heading"),
        (lambda d: d.update(obstacles=[{"type": "circle", "x": 50, "y": 20, "radius": -1}]), "obstacles[0].radius"),
        (lambda d: d.update(obstacles=[{"type": "polygon", "vertices": [[0, 0], [1, 1], [2, 2]]}]),
         "obstacles[0].vertices"),
        (lambda d: d.update(format_version=2), "format_version"),
        (lambda d: d.update(colour="red"), "<root>"),
        (lambda d: d["mission"].update(structured="ordered:ds_1,ds_9"), "mission.structured"),
        (lambda d: d.update(control={"clearance": "wide"}), "control.clearance"),
    ],
)
def test_invariant_violations_name_the_field(mutate, where):
    doc = _doc()
    mutate(doc)
    with pytest.raises(ValidationError) as exc:
        parse_scenario(doc)
    assert exc.value.path == where


def test_load_scenario_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        load_scenario(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("bounds: [unclosed\n")
    with pytest.raises(ParseError):
        load_scenario(bad)
    bad.write_text("- just\n- a list\n")
    with pytest.raises(ParseError):
        load_scenario(bad)


def test_bundled_scenarios_load(lake4, lake4_blocked):
    assert len(lake4.world.stations) == 4
    assert lake4.world.obstacles and lake4.mission.structured is not None
    assert len(lake4_blocked.world.obstacles) > len(lake4.world.obstacles)
