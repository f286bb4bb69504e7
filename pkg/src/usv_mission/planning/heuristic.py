"""Deterministic offline planner: nearest-neighbor ordering over station positions."""

from __future__ import annotations

from ..world import Point2, WorldState, distance
from .plan import MissionSpec, PlanError, SymbolicPlan, VisitOrdered, visit_steps


def greedy_order(start: Point2, stations: list[tuple[str, Point2]]) -> list[str]:
    """Repeatedly visit the closest unvisited station; ties go to the earlier listed one."""
    remaining = list(stations)
    pos = start
    order = []
    while remaining:
        best = min(range(len(remaining)), key=lambda i: (distance(pos, remaining[i][1]), i))
        sid, pos = remaining.pop(best)
        order.append(sid)
    return order


def tour_length(start: Point2, points: list[Point2]) -> float:
    total, pos = 0.0, start
    for p in points:
        total += distance(pos, p)
        pos = p
    return total


def heuristic_plan(
    mission: MissionSpec,
    start: Point2,
    world: WorldState,
    skip: tuple[str, ...] = (),
    demoted: tuple[str, ...] = (),
) -> SymbolicPlan:
    """Plan the stations of ``mission`` not in ``skip``; ``demoted`` ones go last, in that order."""
    structured = mission.structured
    if structured is None:
        raise PlanError("the heuristic backend needs a structured mission (visit_all or ordered:...)")
    late = [s for s in demoted if s not in skip and s in mission.required_stations(world)]
    if isinstance(structured, VisitOrdered):
        first = [s for s in structured.station_ids if s not in skip and s not in late]
        rule = "stations are visited in the order fixed by the mission"
    else:
        pool = [(s.id, s.position) for s in world.stations if s.id not in skip and s.id not in late]
        first = greedy_order(start, pool)
        rule = "nearest-neighbor ordering by straight-line distance from the current location"
    order = first + late
    if not order:
        raise PlanError("no stations left to plan")
    length = tour_length(start, [world.station(s).position for s in order])
    reasoning = f"Ordering rule: {rule}; total straight-line tour length {length:.2f} m."
    if late:
        reasoning += f" Deferred to the end after a failure: {', '.join(late)}."
    return SymbolicPlan(visit_steps(order), reasoning)
