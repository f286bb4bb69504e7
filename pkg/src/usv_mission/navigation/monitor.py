"""Progress monitoring for a single MoveTo transit."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..dynamics import VesselState
from ..world import Point2, distance
from .config import NavConfig
from .guidance import segment_frame
from .pathing import Path


class FailureReason(str, enum.Enum):
    PATH_BLOCKED = "PathBlocked"
    TIMEOUT = "Timeout"
    CONTROL_DEVIATION = "ControlDeviation"


class VerdictKind(str, enum.Enum):
    IN_PROGRESS = "InProgress"
    WAYPOINT_REACHED = "WaypointReached"
    GOAL_REACHED = "GoalReached"
    FAILED = "Failed"


@dataclass(frozen=True)
class MonitorVerdict:
    kind: VerdictKind
    reason: FailureReason | None = None

    def __post_init__(self):
        if (self.kind is VerdictKind.FAILED) != (self.reason is not None):
            raise ValueError("a Failed verdict carries exactly one reason; others carry none")


IN_PROGRESS = MonitorVerdict(VerdictKind.IN_PROGRESS)
WAYPOINT_REACHED = MonitorVerdict(VerdictKind.WAYPOINT_REACHED)
GOAL_REACHED = MonitorVerdict(VerdictKind.GOAL_REACHED)


def time_budget(path: Path, config: NavConfig) -> float:
    return max(config.min_budget, config.timeout_factor * path.total_length / config.cruise_speed)


def monitor(
    state: VesselState,
    path: Path,
    progress: int,
    elapsed: float,
    config: NavConfig,
    deviation_time: float = 0.0,
) -> MonitorVerdict:
    """Classify transit progress.

    ``progress`` indexes the active segment's start waypoint; ``deviation_time``
    is how long cross-track error has continuously exceeded the deviation limit.
    """
    pos = Point2(state.x, state.y)
    wps = path.waypoints
    if distance(pos, wps[-1]) <= config.capture_radius:
        return GOAL_REACHED
    if elapsed > time_budget(path, config):
        return MonitorVerdict(VerdictKind.FAILED, FailureReason.TIMEOUT)
    if deviation_time > config.deviation_window:
        return MonitorVerdict(VerdictKind.FAILED, FailureReason.CONTROL_DEVIATION)
    nxt = progress + 1
    if nxt < len(wps) - 1:
        if distance(pos, wps[nxt]) <= config.capture_radius:
            return WAYPOINT_REACHED
        # a waypoint missed laterally still counts once the vessel is past the segment end
        _, along, _ = segment_frame(pos, wps[progress], wps[nxt])
        if along >= distance(wps[progress], wps[nxt]):
            return WAYPOINT_REACHED
    return IN_PROGRESS
