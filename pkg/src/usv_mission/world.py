"""Static lake model: bounds, docking stations, obstacles and geometric queries.

Headings follow the planar math convention: measured counter-clockwise from
the +x axis, normalized to [-pi, pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union


class ValidationError(ValueError):
    """A scenario value violates a model invariant.

    ``path`` names the offending field (e.g. ``stations[2].id``).
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def wrap_angle(a: float) -> float:
    """Normalize an angle to [-pi, pi)."""
    w = math.fmod(a + math.pi, 2.0 * math.pi)
    if w < 0.0:
        w += 2.0 * math.pi
    w -= math.pi
    # fmod rounding can land exactly on +pi
    if w >= math.pi:
        w -= 2.0 * math.pi
    return w


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


def distance(a: Point2, b: Point2) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass(frozen=True)
class Bounds:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def contains(self, p: Point2) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin


@dataclass(frozen=True)
class DockingStation:
    id: str
    position: Point2
    z: float
    length: float
    width: float
    height: float
    approach_heading: float

    def footprint(self) -> tuple[Point2, ...]:
        """Counter-clockwise corners of the l x w rectangle, l along the approach heading."""
        c, s = math.cos(self.approach_heading), math.sin(self.approach_heading)
        hl, hw = self.length / 2.0, self.width / 2.0
        corners = ((hl, -hw), (hl, hw), (-hl, hw), (-hl, -hw))
        return tuple(
            Point2(self.position.x + c * dx - s * dy, self.position.y + s * dx + c * dy)
            for dx, dy in corners
        )


@dataclass(frozen=True)
class CircleObstacle:
    center: Point2
    radius: float


@dataclass(frozen=True)
class PolygonObstacle:
    vertices: tuple[Point2, ...]  # counter-clockwise


Obstacle = Union[CircleObstacle, PolygonObstacle]


@dataclass(frozen=True)
class Disturbance:
    """Constant current (earth-frame velocity, m/s) and wind force (earth-frame, N)."""

    current: tuple[float, float] = (0.0, 0.0)
    wind_force: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class WorldState:
    bounds: Bounds
    stations: tuple[DockingStation, ...] = ()
    obstacles: tuple[Obstacle, ...] = ()
    disturbance: Disturbance = field(default_factory=Disturbance)

    def station(self, station_id: str) -> DockingStation:
        for s in self.stations:
            if s.id == station_id:
                return s
        raise KeyError(station_id)

    @property
    def station_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.stations)


# --- low-level geometry -----------------------------------------------------


def _cross(ox: float, oy: float, ax: float, ay: float, bx: float, by: float) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    dx, dy = b.x - a.x, b.y - a.y
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return distance(p, a)
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / seg2
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def _on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def _segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    o1 = _cross(a.x, a.y, b.x, b.y, c.x, c.y)
    o2 = _cross(a.x, a.y, b.x, b.y, d.x, d.y)
    o3 = _cross(c.x, c.y, d.x, d.y, a.x, a.y)
    o4 = _cross(c.x, c.y, d.x, d.y, b.x, b.y)
    if o1 * o2 < 0.0 and o3 * o4 < 0.0:
        return True
    return (
        (o1 == 0.0 and _on_segment(c, a, b))
        or (o2 == 0.0 and _on_segment(d, a, b))
        or (o3 == 0.0 and _on_segment(a, c, d))
        or (o4 == 0.0 and _on_segment(b, c, d))
    )


def segment_segment_distance(a: Point2, b: Point2, c: Point2, d: Point2) -> float:
    if _segments_intersect(a, b, c, d):
        return 0.0
    return min(
        point_segment_distance(a, c, d),
        point_segment_distance(b, c, d),
        point_segment_distance(c, a, b),
        point_segment_distance(d, a, b),
    )


def point_in_convex_polygon(p: Point2, vertices: Sequence[Point2]) -> bool:
    """Closed containment test for a counter-clockwise convex polygon."""
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if _cross(a.x, a.y, b.x, b.y, p.x, p.y) < 0.0:
            return False
    return True


def _strictly_inside(p: Point2, vertices: Sequence[Point2]) -> bool:
    n = len(vertices)
    return all(
        _cross(vertices[i].x, vertices[i].y, vertices[(i + 1) % n].x, vertices[(i + 1) % n].y, p.x, p.y) > 0.0
        for i in range(n)
    )


def _polygon_point_distance(p: Point2, vertices: Sequence[Point2]) -> float:
    """Distance to the polygon boundary; negative for points strictly inside."""
    n = len(vertices)
    d = min(point_segment_distance(p, vertices[i], vertices[(i + 1) % n]) for i in range(n))
    return -d if _strictly_inside(p, vertices) else d


def _polygon_segment_distance(a: Point2, b: Point2, vertices: Sequence[Point2]) -> float:
    """Like the point version; a segment that enters the interior scores negative."""
    n = len(vertices)
    d = min(segment_segment_distance(a, b, vertices[i], vertices[(i + 1) % n]) for i in range(n))
    mid = Point2((a.x + b.x) / 2, (a.y + b.y) / 2)
    if _strictly_inside(a, vertices) or _strictly_inside(b, vertices) or _strictly_inside(mid, vertices):
        return -max(d, 1e-12)
    if d == 0.0 and _crosses_interior(a, b, vertices):
        return -1e-12
    return d


def _crosses_interior(a: Point2, b: Point2, vertices: Sequence[Point2]) -> bool:
    # a segment touching the boundary passes through the interior iff some
    # sub-segment between consecutive boundary crossings has an interior midpoint
    ts = {0.0, 1.0}
    n = len(vertices)
    dx, dy = b.x - a.x, b.y - a.y
    for i in range(n):
        c, d = vertices[i], vertices[(i + 1) % n]
        ex, ey = d.x - c.x, d.y - c.y
        den = dx * ey - dy * ex
        if den == 0.0:
            continue
        t = ((c.x - a.x) * ey - (c.y - a.y) * ex) / den
        if 0.0 <= t <= 1.0:
            ts.add(t)
    ts = sorted(ts)
    for t0, t1 in zip(ts, ts[1:]):
        tm = (t0 + t1) / 2
        if _strictly_inside(Point2(a.x + tm * dx, a.y + tm * dy), vertices):
            return True
    return False


def solid_shapes(world: WorldState):
    for obs in world.obstacles:
        yield obs
    for st in world.stations:
        yield PolygonObstacle(st.footprint())


def clearance_at(p: Point2, world: WorldState) -> float:
    """Distance from ``p`` to the nearest obstacle or station footprint (inf if none)."""
    best = math.inf
    for shape in solid_shapes(world):
        if isinstance(shape, CircleObstacle):
            d = max(0.0, distance(p, shape.center) - shape.radius)
        else:
            d = max(0.0, _polygon_point_distance(p, shape.vertices))
        best = min(best, d)
    return best


def is_collision_free(p: Point2, world: WorldState, clearance: float) -> bool:
    if not world.bounds.contains(p):
        return False
    for shape in solid_shapes(world):
        if isinstance(shape, CircleObstacle):
            if distance(p, shape.center) < shape.radius + clearance:
                return False
        elif _polygon_point_distance(p, shape.vertices) < clearance:
            return False
    return True


def segment_is_free(a: Point2, b: Point2, world: WorldState, clearance: float) -> bool:
    """Exact check that every point of segment ab is collision-free at ``clearance``."""
    # bounds are convex, so endpoint containment covers the segment
    if not (world.bounds.contains(a) and world.bounds.contains(b)):
        return False
    for shape in solid_shapes(world):
        if isinstance(shape, CircleObstacle):
            if point_segment_distance(shape.center, a, b) < shape.radius + clearance:
                return False
        elif _polygon_segment_distance(a, b, shape.vertices) < clearance:
            return False
    return True


def approach_point(station: DockingStation, standoff: float) -> tuple[Point2, float]:
    """Standoff position facing the station, and the heading to hold there."""
    h = station.approach_heading
    p = Point2(
        station.position.x - standoff * math.cos(h),
        station.position.y - standoff * math.sin(h),
    )
    return p, h


def polygon_is_convex_ccw(vertices: Sequence[Point2]) -> bool:
    n = len(vertices)
    if n < 3:
        return False
    for i in range(n):
        a, b, c = vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]
        if _cross(a.x, a.y, b.x, b.y, c.x, c.y) <= 0.0:
            return False
    return True


def validate_world(world: WorldState) -> None:
    """Raise ValidationError on the first violated WorldState invariant."""
    b = world.bounds
    if not (b.xmax > b.xmin and b.ymax > b.ymin):
        raise ValidationError("bounds", "empty rectangle")
    seen: set[str] = set()
    for i, st in enumerate(world.stations):
        where = f"stations[{i}]"
        if not st.id:
            raise ValidationError(f"{where}.id", "empty id")
        if st.id in seen:
            raise ValidationError(f"{where}.id", f"duplicate station id {st.id!r}")
        seen.add(st.id)
        for name in ("length", "width", "height"):
            if not getattr(st, name) > 0:
                raise ValidationError(f"{where}.{name}", "must be > 0")
        if not (-math.pi <= st.approach_heading < math.pi):
            raise ValidationError(f"{where}.approach_heading", "must lie in [-pi, pi)")
        for corner in st.footprint():
            if not b.contains(corner):
                raise ValidationError(where, f"station {st.id!r} lies outside bounds")
    for i, obs in enumerate(world.obstacles):
        where = f"obstacles[{i}]"
        if isinstance(obs, CircleObstacle):
            if not obs.radius > 0:
                raise ValidationError(f"{where}.radius", "must be > 0")
            c = obs.center
            if not (
                b.contains(Point2(c.x - obs.radius, c.y - obs.radius))
                and b.contains(Point2(c.x + obs.radius, c.y + obs.radius))
            ):
                raise ValidationError(where, "obstacle lies outside bounds")
        else:
            if not polygon_is_convex_ccw(obs.vertices):
                raise ValidationError(
                    f"{where}.vertices", "need >= 3 vertices forming a convex counter-clockwise polygon"
                )
            if not all(b.contains(v) for v in obs.vertices):
                raise ValidationError(where, "obstacle lies outside bounds")
    stations = world.stations
    for i in range(len(stations)):
        for j in range(i + 1, len(stations)):
            fi, fj = stations[i].footprint(), stations[j].footprint()
            if _footprints_overlap(fi, fj):
                raise ValidationError(
                    f"stations[{j}]", f"footprint of {stations[j].id!r} overlaps {stations[i].id!r}"
                )


def _footprints_overlap(p: Sequence[Point2], q: Sequence[Point2]) -> bool:
    # separating axis test on two convex polygons; touching counts as overlap
    for poly in (p, q):
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            nx, ny = b.y - a.y, a.x - b.x
            pp = [nx * v.x + ny * v.y for v in p]
            qq = [nx * v.x + ny * v.y for v in q]
            if max(pp) < min(qq) or max(qq) < min(pp):
                return False
    return True
