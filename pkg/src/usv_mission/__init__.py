"""Mission planning and simulation for an inspection USV: prompt-driven symbolic
planning, grid path planning, LOS guidance, PID control and replanning on failure."""

from .dynamics import PodCommand, VesselParams, VesselState
from .executor import (
    MISSION_COMPLETED,
    MISSION_INCOMPLETE,
    ActionOutcome,
    DataRecord,
    ExecutorConfig,
    MissionReport,
    completion_check,
    execute_action,
    run_mission,
)
from .scenario import ParseError, Scenario, bundled_scenario, load_scenario
from .world import Point2, ValidationError, WorldState

__version__ = "0.1.0"

__all__ = [
    "MISSION_COMPLETED", "MISSION_INCOMPLETE", "ActionOutcome", "DataRecord", "ExecutorConfig",
    "MissionReport", "ParseError", "Point2", "PodCommand", "Scenario", "ValidationError",
    "VesselParams", "VesselState", "WorldState", "bundled_scenario", "completion_check",
    "execute_action", "load_scenario", "run_mission",
]
