"""Planned-vs-executed trajectory plot as a self-contained SVG document."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .executor import MissionReport
from .planning import ActionKind
from .world import CircleObstacle, Point2, WorldState, approach_point

WIDTH = 800.0
MARGIN = 40.0
LEGEND_H = 60.0

PLANNED_COLOR = "#d62728"
EXECUTED_COLOR = "#1f77b4"


def planned_waypoints(report: MissionReport, world: WorldState, standoff: float) -> list[tuple[str, Point2]]:
    """Approach points of every station targeted by a MoveTo in any plan, first-seen order."""
    seen: dict[str, Point2] = {}
    for plan in report.plans:
        for a in plan.steps:
            if a.kind is ActionKind.MOVE_TO and a.station not in seen:
                seen[a.station] = approach_point(world.station(a.station), standoff)[0]
    return list(seen.items())


class _Frame:
    def __init__(self, world: WorldState):
        b = world.bounds
        self.b = b
        self.scale = (WIDTH - 2 * MARGIN) / b.width
        self.height = 2 * MARGIN + b.height * self.scale + LEGEND_H

    def x(self, x: float) -> str:
        return f"{MARGIN + (x - self.b.xmin) * self.scale:.2f}"

    def y(self, y: float) -> str:
        return f"{MARGIN + (self.b.ymax - y) * self.scale:.2f}"

    def pt(self, p: Point2) -> str:
        return f"{self.x(p.x)},{self.y(p.y)}"


def render_plot(report: MissionReport, world: WorldState, standoff: float, title: str = "") -> str:
    """Bounds, stations, obstacles, planned waypoint markers and the executed polyline."""
    if not report.trajectory:
        raise ValueError("report has no trajectory points")
    f = _Frame(world)
    b = world.bounds
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0f}" height="{f.height:.0f}" '
        f'viewBox="0 0 {WIDTH:.0f} {f.height:.0f}" font-family="sans-serif" font-size="12">',
        f"<title>{escape(title or 'Planned vs executed trajectory')}</title>",
        f'<rect class="lake" x="{f.x(b.xmin)}" y="{f.y(b.ymax)}" width="{b.width * f.scale:.2f}" '
        f'height="{b.height * f.scale:.2f}" fill="#eaf4fb" stroke="#333"/>',
    ]
    for obs in world.obstacles:
        if isinstance(obs, CircleObstacle):
            out.append(
                f'<circle class="obstacle" cx="{f.x(obs.center.x)}" cy="{f.y(obs.center.y)}" '
                f'r="{obs.radius * f.scale:.2f}" fill="#999"/>'
            )
        else:
            pts = " ".join(f.pt(v) for v in obs.vertices)
            out.append(f'<polygon class="obstacle" points="{pts}" fill="#999"/>')
    for st in world.stations:
        pts = " ".join(f.pt(v) for v in st.footprint())
        out.append(f'<polygon class="station" points="{pts}" fill="#8c564b"/>')
        out.append(
            f'<text class="station-label" x="{f.x(st.position.x)}" y="{f.y(st.position.y)}" dy="-8" '
            f'text-anchor="middle">{escape(st.id)}</text>'
        )

    traj = report.trajectory
    if len(traj) >= 2:
        pts = " ".join(f"{f.x(s.x)},{f.y(s.y)}" for s in traj)
        out.append(
            f'<polyline class="executed" points="{pts}" fill="none" stroke="{EXECUTED_COLOR}" stroke-width="1.5"/>'
        )
    for sid, p in planned_waypoints(report, world, standoff):
        out.append(
            f'<circle class="planned-waypoint" data-station="{escape(sid)}" cx="{f.x(p.x)}" cy="{f.y(p.y)}" '
            f'r="5" fill="{PLANNED_COLOR}"/>'
        )

    ly = f.height - LEGEND_H + 20
    out += [
        '<g class="legend">',
        f'<circle cx="{MARGIN + 8:.2f}" cy="{ly:.2f}" r="5" fill="{PLANNED_COLOR}"/>',
        f'<text x="{MARGIN + 20:.2f}" y="{ly + 4:.2f}">planned waypoints (symbolic plan)</text>',
        f'<line x1="{MARGIN + 260:.2f}" y1="{ly:.2f}" x2="{MARGIN + 290:.2f}" y2="{ly:.2f}" '
        f'stroke="{EXECUTED_COLOR}" stroke-width="2"/>',
        f'<text x="{MARGIN + 298:.2f}" y="{ly + 4:.2f}">executed trajectory</text>',
        f'<text x="{MARGIN:.2f}" y="{ly + 24:.2f}">{escape(report.final_status)}</text>',
        "</g>",
        "</svg>",
    ]
    return "\n".join(out) + "\n"
