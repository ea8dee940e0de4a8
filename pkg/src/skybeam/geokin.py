"""Local-frame geodesy and UAV kinematics.

Geodetic positions are projected onto a flat east/north/up frame around a
scenario origin.  Flight paths are piecewise-linear waypoint lists flown at
constant speed and sampled on a fixed tick, which keeps every downstream
quantity reproducible from the scenario file alone.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import NamedTuple

EARTH_RADIUS_M = 6_371_000.0

# Horizontal separations below this count as "directly overhead": bearing is
# numerically meaningless there and callers must not act on it.
DEGENERATE_HORIZONTAL_M = 1e-6

# Slack when deciding whether the last tick coincides with the path end.
_TIME_EPS_S = 1e-9


def wrap_360(angle_deg: float) -> float:
    """Wrap an angle in degrees to [0, 360)."""
    return angle_deg % 360.0


def wrap_180(angle_deg: float) -> float:
    """Wrap an angle in degrees to [-180, 180)."""
    return (angle_deg + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class GeoPosition:
    """Geodetic position: latitude/longitude in degrees, altitude in metres."""

    latitude: float
    longitude: float
    altitude: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.latitude) and -90.0 <= self.latitude <= 90.0):
            raise ValueError(f"latitude {self.latitude!r} outside [-90, 90]")
        if not (math.isfinite(self.longitude) and -180.0 <= self.longitude <= 180.0):
            raise ValueError(f"longitude {self.longitude!r} outside [-180, 180]")
        if not math.isfinite(self.altitude):
            raise ValueError(f"altitude {self.altitude!r} is not finite")


@dataclass(frozen=True)
class EnuPosition:
    """Position in the local east/north/up frame, metres."""

    east: float
    north: float
    up: float = 0.0

    def __post_init__(self):
        for name in ("east", "north", "up"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} {getattr(self, name)!r} is not finite")

    def horizontal_distance(self, other: "EnuPosition") -> float:
        return math.hypot(other.east - self.east, other.north - self.north)

    def distance(self, other: "EnuPosition") -> float:
        return math.sqrt(
            (other.east - self.east) ** 2
            + (other.north - self.north) ** 2
            + (other.up - self.up) ** 2
        )


@dataclass(frozen=True)
class UAVState:
    """Pose of the vehicle at one instant.

    heading is the direction the airframe nose points, degrees clockwise from
    north.  It is decoupled from the velocity vector: the vehicle can crab
    sideways while holding a fixed heading.
    """

    position: EnuPosition
    heading: float
    time: float = 0.0
    speed: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.heading):
            raise ValueError(f"heading {self.heading!r} is not finite")
        object.__setattr__(self, "heading", wrap_360(self.heading))
        if not math.isfinite(self.time) or self.time < 0.0:
            raise ValueError(f"time {self.time!r} must be finite and >= 0")
        if not math.isfinite(self.speed) or self.speed < 0.0:
            raise ValueError(f"speed {self.speed!r} must be finite and >= 0")


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-linear path flown at constant speed with a fixed heading."""

    waypoints: tuple[EnuPosition, ...]
    speed: float
    heading: float
    tick: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        if len(self.waypoints) < 2:
            raise ValueError("trajectory needs at least two waypoints")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a.distance(b) <= 0.0:
                raise ValueError(f"zero-length segment at waypoint {a}")
        if not math.isfinite(self.speed) or self.speed <= 0.0:
            raise ValueError(f"speed {self.speed!r} must be finite and > 0")
        if not math.isfinite(self.tick) or self.tick <= 0.0:
            raise ValueError(f"tick {self.tick!r} must be finite and > 0")
        if not math.isfinite(self.heading):
            raise ValueError(f"heading {self.heading!r} is not finite")

    @property
    def length(self) -> float:
        return sum(a.distance(b) for a, b in zip(self.waypoints, self.waypoints[1:]))

    @property
    def duration(self) -> float:
        return self.length / self.speed


class Direction(NamedTuple):
    """Line-of-sight direction from one point to another.

    bearing: degrees clockwise from north, in [0, 360).
    elevation: degrees above the horizontal, in [-90, 90].
    degenerate: True when the points are (nearly) vertically aligned and the
    bearing carries no information.
    """

    bearing: float
    elevation: float
    degenerate: bool = False


def to_enu(origin: GeoPosition, position: GeoPosition) -> EnuPosition:
    """Project a geodetic position into the east/north/up frame at origin.

    Equirectangular small-area approximation: metres per degree of longitude
    shrink with cos(latitude) at the origin.  Adequate for deployments a few
    tens of kilometres across, which is all the simulator targets.
    """
    lat0 = math.radians(origin.latitude)
    east = math.radians(position.longitude - origin.longitude) * EARTH_RADIUS_M * math.cos(lat0)
    north = math.radians(position.latitude - origin.latitude) * EARTH_RADIUS_M
    return EnuPosition(east, north, position.altitude - origin.altitude)


def bearing_elevation(frm: EnuPosition, to: EnuPosition) -> Direction:
    """Bearing/elevation of the straight line from frm to to.

    When the horizontal offset is below DEGENERATE_HORIZONTAL_M the bearing is
    reported as 0.0 with degenerate=True; elevation is still meaningful.
    """
    d_east = to.east - frm.east
    d_north = to.north - frm.north
    d_up = to.up - frm.up
    ground = math.hypot(d_east, d_north)
    if ground < DEGENERATE_HORIZONTAL_M:
        elevation = 90.0 if d_up > 0 else (-90.0 if d_up < 0 else 0.0)
        return Direction(0.0, elevation, True)
    bearing = wrap_360(math.degrees(math.atan2(d_east, d_north)))
    elevation = math.degrees(math.atan2(d_up, ground))
    return Direction(bearing, elevation, False)


def _position_at(trajectory: Trajectory, cumulative: list[float], arc: float) -> EnuPosition:
    """Point at arc length arc along the path (arc clamped to [0, length])."""
    points = trajectory.waypoints
    if arc <= 0.0:
        return points[0]
    if arc >= cumulative[-1]:
        return points[-1]
    seg = bisect_right(cumulative, arc) - 1
    seg = min(seg, len(points) - 2)
    a, b = points[seg], points[seg + 1]
    frac = (arc - cumulative[seg]) / (cumulative[seg + 1] - cumulative[seg])
    return EnuPosition(
        a.east + frac * (b.east - a.east),
        a.north + frac * (b.north - a.north),
        a.up + frac * (b.up - a.up),
    )


def sample_trajectory(trajectory: Trajectory) -> list[UAVState]:
    """Sample the path on the tick grid, always including the endpoint.

    Samples sit at k * tick for k = 0 .. floor(duration / tick).  If the last
    grid point falls short of the path end by more than a nanosecond, one
    extra state at the exact end time is appended; otherwise the last grid
    sample is snapped onto the final waypoint so the path always terminates
    exactly where the scenario said it would.
    """
    cumulative = [0.0]
    for a, b in zip(trajectory.waypoints, trajectory.waypoints[1:]):
        cumulative.append(cumulative[-1] + a.distance(b))
    duration = cumulative[-1] / trajectory.speed

    n_ticks = int(math.floor(duration / trajectory.tick + _TIME_EPS_S))
    states = []
    for k in range(n_ticks + 1):
        t = k * trajectory.tick
        pos = _position_at(trajectory, cumulative, trajectory.speed * t)
        states.append(UAVState(pos, trajectory.heading, time=t, speed=trajectory.speed))

    leftover = duration - n_ticks * trajectory.tick
    if leftover > _TIME_EPS_S:
        states.append(
            UAVState(
                trajectory.waypoints[-1],
                trajectory.heading,
                time=duration,
                speed=trajectory.speed,
            )
        )
    else:
        last = states[-1]
        states[-1] = UAVState(
            trajectory.waypoints[-1], last.heading, time=last.time, speed=last.speed
        )
    return states
