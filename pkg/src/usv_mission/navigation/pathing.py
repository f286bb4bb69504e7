"""Occupancy-grid A* with line-of-sight shortcut smoothing."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..world import CircleObstacle, Point2, WorldState, solid_shapes, distance, is_collision_free, segment_is_free

SQRT2 = math.sqrt(2.0)

# (drow, dcol, cost in cell units); diagonals may not cut blocked corners
MOVES = (
    (-1, -1, SQRT2), (-1, 0, 1.0), (-1, 1, SQRT2),
    (0, -1, 1.0), (0, 1, 1.0),
    (1, -1, SQRT2), (1, 0, 1.0), (1, 1, SQRT2),
)

Cell = tuple[int, int]


class NoPathFound(RuntimeError):
    """The goal cannot be reached at the requested clearance."""


@dataclass(frozen=True)
class Path:
    waypoints: tuple[Point2, ...]
    raw_waypoints: tuple[Point2, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a == b:
                raise ValueError(f"consecutive duplicate waypoint {a}")

    @property
    def total_length(self) -> float:
        return polyline_length(self.waypoints)

    @property
    def goal(self) -> Point2:
        return self.waypoints[-1]


def polyline_length(points) -> float:
    return sum(distance(a, b) for a, b in zip(points, points[1:]))


@dataclass(frozen=True)
class OccupancyGrid:
    """Row-major grid over the world bounds; row index grows with y."""

    xmin: float
    ymin: float
    resolution: float
    blocked: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocked.shape

    def center(self, cell: Cell) -> Point2:
        row, col = cell
        return Point2(self.xmin + (col + 0.5) * self.resolution, self.ymin + (row + 0.5) * self.resolution)

    def cell_of(self, p: Point2) -> Cell:
        rows, cols = self.shape
        col = int(math.floor((p.x - self.xmin) / self.resolution))
        row = int(math.floor((p.y - self.ymin) / self.resolution))
        return min(max(row, 0), rows - 1), min(max(col, 0), cols - 1)


def _segment_distance_field(px: np.ndarray, py: np.ndarray, a: Point2, b: Point2) -> np.ndarray:
    dx, dy = b.x - a.x, b.y - a.y
    seg2 = dx * dx + dy * dy
    t = np.clip(((px - a.x) * dx + (py - a.y) * dy) / seg2, 0.0, 1.0)
    return np.hypot(px - (a.x + t * dx), py - (a.y + t * dy))


def _clearance_field(px: np.ndarray, py: np.ndarray, world: WorldState) -> np.ndarray:
    """Signed distance to the nearest solid shape, negative inside polygons."""
    field = np.full(px.shape, np.inf)
    for shape in solid_shapes(world):
        if isinstance(shape, CircleObstacle):
            d = np.hypot(px - shape.center.x, py - shape.center.y) - shape.radius
        else:
            vs = shape.vertices
            edges = list(zip(vs, vs[1:] + vs[:1]))
            d = np.min([_segment_distance_field(px, py, a, b) for a, b in edges], axis=0)
            inside = np.all([(b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x) > 0.0 for a, b in edges], axis=0)
            d = np.where(inside, -d, d)
        field = np.minimum(field, d)
    return field


@lru_cache(maxsize=32)
def build_grid(world: WorldState, resolution: float, clearance: float) -> OccupancyGrid:
    """A cell is blocked iff its center fails ``is_collision_free`` at ``clearance``."""
    b = world.bounds
    cols = max(1, int(math.floor(b.width / resolution)))
    rows = max(1, int(math.floor(b.height / resolution)))
    px, py = np.meshgrid(
        b.xmin + (np.arange(cols) + 0.5) * resolution,
        b.ymin + (np.arange(rows) + 0.5) * resolution,
    )
    field = _clearance_field(px, py, world)
    blocked = field < clearance
    # settle cells on the threshold with the scalar rule so rounding cannot flip them
    for row, col in zip(*np.nonzero(np.abs(field - clearance) <= 1e-9)):
        blocked[row, col] = not is_collision_free(Point2(float(px[row, col]), float(py[row, col])), world, clearance)
    blocked |= (px < b.xmin) | (px > b.xmax) | (py < b.ymin) | (py > b.ymax)
    blocked.setflags(write=False)
    return OccupancyGrid(b.xmin, b.ymin, resolution, blocked)


def grid_neighbors(blocked: np.ndarray, cell: Cell):
    """Free 8-connected neighbors of ``cell``; diagonals need both side cells free."""
    rows, cols = blocked.shape
    r, c = cell
    for dr, dc, cost in MOVES:
        nr, nc = r + dr, c + dc
        if not (0 <= nr < rows and 0 <= nc < cols) or blocked[nr, nc]:
            continue
        if dr and dc and (blocked[r + dr, c] or blocked[r, c + dc]):
            continue
        yield (nr, nc), cost


def octile(a: Cell, b: Cell) -> float:
    dr, dc = abs(a[0] - b[0]), abs(a[1] - b[1])
    return (SQRT2 - 1.0) * min(dr, dc) + max(dr, dc)


def astar(blocked: np.ndarray, start: Cell, goal: Cell) -> tuple[list[Cell], float]:
    """Shortest 8-connected cell path; returns (cells, cost in cell units).

    Ties are broken by lower f, then lower h, then row-major cell order.
    """
    if blocked[start] or blocked[goal]:
        raise NoPathFound(f"start {start} or goal {goal} cell is blocked")
    g = {start: 0.0}
    parent: dict[Cell, Cell] = {}
    h0 = octile(start, goal)
    heap = [(h0, h0, start[0], start[1])]
    closed: set[Cell] = set()
    while heap:
        _, _, r, c = heapq.heappop(heap)
        cell = (r, c)
        if cell in closed:
            continue
        if cell == goal:
            cells = [cell]
            while cells[-1] in parent:
                cells.append(parent[cells[-1]])
            cells.reverse()
            return cells, g[goal]
        closed.add(cell)
        gc = g[cell]
        for nb, cost in grid_neighbors(blocked, cell):
            if nb in closed:
                continue
            ng = gc + cost
            if ng < g.get(nb, math.inf):
                g[nb] = ng
                parent[nb] = cell
                h = octile(nb, goal)
                heapq.heappush(heap, (ng + h, h, nb[0], nb[1]))
    raise NoPathFound(f"no grid path from {start} to {goal}")


def _connect_cell(p: Point2, grid: OccupancyGrid, world: WorldState, clearance: float) -> Cell:
    """Nearest free cell whose center is reachable from ``p`` by a straight segment free at ``clearance``."""
    rows, cols = grid.shape
    r0, c0 = grid.cell_of(p)
    reach = int(math.ceil(max(clearance, 3.0 * grid.resolution) / grid.resolution)) + 3
    candidates = []
    for r in range(max(0, r0 - reach), min(rows, r0 + reach + 1)):
        for c in range(max(0, c0 - reach), min(cols, c0 + reach + 1)):
            if not grid.blocked[r, c]:
                candidates.append((distance(p, grid.center((r, c))), r, c))
    candidates.sort()
    for _, r, c in candidates:
        if segment_is_free(p, grid.center((r, c)), world, clearance):
            return (r, c)
    raise NoPathFound(f"no free grid cell reachable from ({p.x:.2f}, {p.y:.2f})")


def smooth_path(points: list[Point2], world: WorldState, clearance: float) -> list[Point2]:
    """Greedy line-of-sight shortcutting: from each kept point jump to the farthest visible one."""
    if len(points) <= 2:
        return list(points)
    out = [points[0]]
    i = 0
    while i < len(points) - 1:
        j = len(points) - 1
        while j > i + 1 and not segment_is_free(points[i], points[j], world, clearance):
            j -= 1
        out.append(points[j])
        i = j
    return out


def _dedupe(points: list[Point2]) -> list[Point2]:
    out: list[Point2] = []
    for p in points:
        if not out or out[-1] != p:
            out.append(p)
    return out


def plan_path(
    start: Point2,
    goal: Point2,
    world: WorldState,
    resolution: float,
    clearance: float,
    strict_start: bool = True,
) -> Path:
    """Collision-free path from ``start`` to ``goal``; raises NoPathFound.

    With ``strict_start=False`` a start inside the clearance margin (but not
    inside an obstacle) is accepted and joined to the grid by a segment that
    only has to avoid contact; the vessel may have drifted there.
    """
    start_clearance = clearance
    if not is_collision_free(start, world, clearance):
        if strict_start or not is_collision_free(start, world, 0.0):
            raise NoPathFound(f"start ({start.x:.2f}, {start.y:.2f}) is not collision-free")
        start_clearance = 0.0
    if not is_collision_free(goal, world, clearance):
        raise NoPathFound(f"goal ({goal.x:.2f}, {goal.y:.2f}) is not collision-free")
    if start == goal:
        return Path((start,), (start,))
    if start_clearance == clearance and segment_is_free(start, goal, world, clearance):
        return Path((start, goal), (start, goal))
    grid = build_grid(world, resolution, clearance)
    s_cell = _connect_cell(start, grid, world, start_clearance)
    g_cell = _connect_cell(goal, grid, world, clearance)
    cells, _ = astar(grid.blocked, s_cell, g_cell)
    raw = _dedupe([start] + [grid.center(c) for c in cells] + [goal])
    smoothed = _dedupe(smooth_path(raw, world, clearance))
    return Path(tuple(smoothed), tuple(raw))
