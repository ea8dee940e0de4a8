import math

import pytest

from skybeam.geokin import (
    Direction,
    EnuPosition,
    GeoPosition,
    Trajectory,
    UAVState,
    bearing_elevation,
    sample_trajectory,
    to_enu,
    wrap_180,
    wrap_360,
)


def test_wrap_360_range():
    assert wrap_360(0.0) == 0.0
    assert wrap_360(360.0) == 0.0
    assert wrap_360(-30.0) == 330.0
    assert wrap_360(725.0) == 5.0


def test_wrap_180_range():
    assert wrap_180(0.0) == 0.0
    assert wrap_180(180.0) == -180.0
    assert wrap_180(-180.0) == -180.0
    assert wrap_180(190.0) == -170.0
    assert wrap_180(-190.0) == 170.0


@pytest.mark.parametrize("angle", [0.0, 17.3, -250.0, 359.9, 1234.5])
def test_wrap_consistency(angle):
    assert 0.0 <= wrap_360(angle) < 360.0
    assert -180.0 <= wrap_180(angle) < 180.0
    assert math.isclose(wrap_360(angle) % 360.0, wrap_360(wrap_180(angle)) % 360.0,
                        abs_tol=1e-9)


def test_geo_position_validation():
    GeoPosition(45.0, 10.0, 30.0)
    with pytest.raises(ValueError):
        GeoPosition(91.0, 0.0)
    with pytest.raises(ValueError):
        GeoPosition(0.0, 181.0)
    with pytest.raises(ValueError):
        GeoPosition(0.0, 0.0, math.nan)


def test_to_enu_north_step():
    # 0.001 deg of latitude is 0.001 * pi/180 * 6371000 m of northing.
    origin = GeoPosition(45.0, 10.0, 0.0)
    north = to_enu(origin, GeoPosition(45.001, 10.0, 0.0))
    assert north.east == 0.0
    assert north.north == pytest.approx(111.19492664455875, abs=1e-9)
    assert north.up == 0.0


def test_to_enu_east_step_shrinks_with_latitude():
    origin = GeoPosition(45.0, 10.0, 0.0)
    east = to_enu(origin, GeoPosition(45.0, 10.001, 0.0))
    assert east.north == 0.0
    assert east.east == pytest.approx(78.62668666390822, abs=1e-9)


def test_to_enu_altitude_is_relative():
    origin = GeoPosition(45.0, 10.0, 12.0)
    up = to_enu(origin, GeoPosition(45.0, 10.0, 42.0))
    assert (up.east, up.north, up.up) == (0.0, 0.0, 30.0)


def test_bearing_elevation_cardinal():
    o = EnuPosition(0.0, 0.0, 0.0)
    assert bearing_elevation(o, EnuPosition(0.0, 100.0, 0.0)).bearing == 0.0
    assert bearing_elevation(o, EnuPosition(100.0, 0.0, 0.0)).bearing == 90.0
    assert bearing_elevation(o, EnuPosition(0.0, -100.0, 0.0)).bearing == 180.0
    assert bearing_elevation(o, EnuPosition(-100.0, 0.0, 0.0)).bearing == 270.0


def test_bearing_elevation_oblique():
    d = bearing_elevation(EnuPosition(0.0, 0.0, 0.0), EnuPosition(3.0, 4.0, 0.0))
    assert d.bearing == pytest.approx(36.86989764584402, abs=1e-12)
    assert d.elevation == 0.0
    assert not d.degenerate


def test_bearing_elevation_downward():
    d = bearing_elevation(EnuPosition(0.0, 0.0, 30.0), EnuPosition(100.0, 0.0, 0.0))
    assert d.bearing == 90.0
    assert d.elevation == pytest.approx(-16.69924423399362, abs=1e-12)


def test_bearing_elevation_degenerate_overhead():
    d = bearing_elevation(EnuPosition(0.0, 0.0, 0.0), EnuPosition(0.0, 0.0, 50.0))
    assert d == Direction(0.0, 90.0, True)
    d = bearing_elevation(EnuPosition(0.0, 0.0, 50.0), EnuPosition(0.0, 0.0, 0.0))
    assert d == Direction(0.0, -90.0, True)


def test_uav_state_normalizes_heading():
    state = UAVState(EnuPosition(0.0, 0.0, 30.0), heading=-90.0)
    assert state.heading == 270.0
    with pytest.raises(ValueError):
        UAVState(EnuPosition(0.0, 0.0, 30.0), heading=0.0, time=-1.0)


def test_trajectory_validation():
    p0 = EnuPosition(0.0, 0.0, 30.0)
    p1 = EnuPosition(0.0, 100.0, 30.0)
    with pytest.raises(ValueError):
        Trajectory((p0,), speed=1.0, heading=0.0)
    with pytest.raises(ValueError):
        Trajectory((p0, p0), speed=1.0, heading=0.0)
    with pytest.raises(ValueError):
        Trajectory((p0, p1), speed=0.0, heading=0.0)
    with pytest.raises(ValueError):
        Trajectory((p0, p1), speed=1.0, heading=0.0, tick=0.0)


def test_sample_count_with_ragged_final_tick():
    # 100 m at 2.7778 m/s is 35.99971 s of flight: samples at 0.2 s cover
    # 0..35.8, then one extra state lands exactly on the endpoint.
    t = Trajectory(
        (EnuPosition(0.0, 0.0, 30.0), EnuPosition(0.0, 100.0, 30.0)),
        speed=2.7778, heading=0.0, tick=0.2,
    )
    states = sample_trajectory(t)
    assert len(states) == 181
    assert states[0].time == 0.0
    assert states[-2].time == pytest.approx(179 * 0.2)
    assert states[-1].time == pytest.approx(100.0 / 2.7778)
    assert (states[-1].position.east, states[-1].position.north) == (0.0, 100.0)


def test_sample_count_when_duration_is_tick_multiple():
    # Same path at exactly 10/3.6 m/s lasts 36.0 s: the final grid sample
    # coincides with the endpoint, so nothing extra is appended.
    t = Trajectory(
        (EnuPosition(0.0, 0.0, 30.0), EnuPosition(0.0, 100.0, 30.0)),
        speed=10.0 / 3.6, heading=0.0, tick=0.2,
    )
    states = sample_trajectory(t)
    assert len(states) == 181
    assert states[-1].time == pytest.approx(36.0)
    assert (states[-1].position.east, states[-1].position.north) == (0.0, 100.0)


def test_sample_positions_follow_constant_speed():
    t = Trajectory(
        (EnuPosition(0.0, 0.0, 10.0), EnuPosition(30.0, 40.0, 10.0)),
        speed=5.0, heading=90.0, tick=0.5,
    )
    states = sample_trajectory(t)
    assert states[-1].time == pytest.approx(10.0)
    for state in states:
        arc = 5.0 * state.time
        assert state.position.east == pytest.approx(30.0 * arc / 50.0, abs=1e-9)
        assert state.position.north == pytest.approx(40.0 * arc / 50.0, abs=1e-9)
        assert state.heading == 90.0
        assert state.speed == 5.0


def test_sample_multi_segment_monotone_time_and_corners():
    square = Trajectory(
        (
            EnuPosition(0.0, 0.0, 20.0),
            EnuPosition(100.0, 0.0, 20.0),
            EnuPosition(100.0, 100.0, 20.0),
        ),
        speed=4.0, heading=0.0, tick=0.3,
    )
    states = sample_trajectory(square)
    times = [s.time for s in states]
    assert times == sorted(times)
    assert len(set(times)) == len(times)
    # Arc length 200 m at 4 m/s is 50 s; 0.3 does not divide it, so the
    # endpoint is appended.
    assert states[-1].time == pytest.approx(50.0)
    assert (states[-1].position.east, states[-1].position.north) == (100.0, 100.0)
    mid = min(states, key=lambda s: abs(s.time - 25.0))
    assert mid.position.east == pytest.approx(100.0, abs=4.0 * 0.3)
