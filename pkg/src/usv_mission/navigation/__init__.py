"""Path planning, LOS guidance, PID control and transit monitoring."""

from .config import NavConfig
from .control import Autopilot, PidState, Twist, allocate_thrust, compute_twist, pid_step
from .guidance import cross_track_error, los_heading
from .monitor import FailureReason, MonitorVerdict, VerdictKind, monitor, time_budget
from .pathing import NoPathFound, OccupancyGrid, Path, astar, build_grid, plan_path, smooth_path

__all__ = [
    "Autopilot", "FailureReason", "MonitorVerdict", "NavConfig", "NoPathFound", "OccupancyGrid",
    "Path", "PidState", "Twist", "VerdictKind", "allocate_thrust", "astar", "build_grid",
    "compute_twist", "cross_track_error", "los_heading", "monitor", "pid_step", "plan_path",
    "smooth_path", "time_budget",
]
