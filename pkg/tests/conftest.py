import math

import pytest

from usv_mission.scenario import bundled_scenario, load_scenario
from usv_mission.world import Bounds, DockingStation, Point2, WorldState


@pytest.fixture(scope="session")
def lake4():
    return load_scenario(bundled_scenario("lake4"))


@pytest.fixture(scope="session")
def lake4_blocked():
    return load_scenario(bundled_scenario("lake4_blocked"))


def station(sid, x, y, heading=0.0, l=4.0, w=2.0):
    return DockingStation(sid, Point2(x, y), 0.0, l, w, 2.0, heading)


@pytest.fixture
def open_water():
    return WorldState(Bounds(-50.0, -50.0, 50.0, 50.0))


FOUR_STATION_WORLD = WorldState(
    Bounds(-10.0, -10.0, 60.0, 60.0),
    stations=(
        station("ds_1", 10.0, 0.0),
        station("ds_2", 0.0, 20.0, math.pi / 2),
        station("ds_3", 30.0, 30.0),
        station("ds_4", 45.0, 5.0, -math.pi / 2),
    ),
)


@pytest.fixture
def four_station_world():
    return FOUR_STATION_WORLD
