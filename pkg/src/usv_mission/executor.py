"""Closed-loop mission execution with replan-on-failure and a completion check."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

from .dynamics import VesselParams, VesselState, step
from .navigation import Autopilot, FailureReason, NavConfig, NoPathFound, Path, VerdictKind, monitor, plan_path
from .navigation.guidance import cross_track_error
from .planning import (
    DEFAULT_CAPABILITIES,
    Action,
    ActionKind,
    CapabilitySet,
    FeedbackReport,
    MissionSpec,
    PlanBackend,
    PlanError,
    PlanRequest,
    ReplanBudgetExhausted,
    SymbolicPlan,
    build_prompt,
    default_template,
    generate_plan,
    replan_with_feedback,
)
from .world import Point2, WorldState, approach_point, wrap_angle

log = logging.getLogger(__name__)

MISSION_COMPLETED = "Mission Completed"
MISSION_INCOMPLETE = "Mission Incomplete"


@dataclass(frozen=True)
class ExecutorConfig:
    dt: float = 0.1
    max_sim_time: float = 1800.0
    max_replans: int = 3
    align_tolerance: float = 0.05
    align_timeout: float = 60.0
    standoff: float = 10.0
    nav: NavConfig = field(default_factory=NavConfig)

    def __post_init__(self):
        if not 0 < self.dt <= 0.5:
            raise ValueError("dt must lie in (0, 0.5]")
        for name in ("max_sim_time", "align_tolerance", "align_timeout", "standoff"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.max_replans < 0:
            raise ValueError("max_replans must be >= 0")

    @property
    def capture_radius(self) -> float:
        return self.nav.capture_radius


@dataclass(frozen=True)
class DataRecord:
    station: str
    timestamp: float
    pose: tuple[float, float, float]
    alignment_error: float


@dataclass(frozen=True)
class ActionOutcome:
    action: Action
    status: str  # "Success" | "Failed"
    start_time: float
    end_time: float
    end_location: Point2
    reason: str | None = None
    episode: int = 0
    record: DataRecord | None = None
    path: Path | None = None

    @property
    def succeeded(self) -> bool:
        return self.status == "Success"


@dataclass
class MissionReport:
    mission: MissionSpec
    backend: str
    outcomes: list[ActionOutcome] = field(default_factory=list)
    records: list[DataRecord] = field(default_factory=list)
    plans: list[SymbolicPlan] = field(default_factory=list)
    feedback: list[FeedbackReport] = field(default_factory=list)
    trajectory: list[VesselState] = field(default_factory=list)
    unreachable: list[str] = field(default_factory=list)
    final_status: str = MISSION_INCOMPLETE
    termination: str = ""
    errors: list[str] = field(default_factory=list)
    required: tuple[str, ...] = ()

    @property
    def recorded_stations(self) -> list[str]:
        return [r.station for r in self.records]


def _success(action, t0, state, **kw) -> ActionOutcome:
    return ActionOutcome(action, "Success", t0, state.t, Point2(state.x, state.y), **kw)


def _failure(action, t0, state, reason: FailureReason, **kw) -> ActionOutcome:
    return ActionOutcome(action, "Failed", t0, state.t, Point2(state.x, state.y), reason=reason.value, **kw)


def _move_to(action, world, state, params, config, autopilot, deadline):
    nav = config.nav
    t0 = state.t
    goal, _ = approach_point(world.station(action.station), config.standoff)
    try:
        path = plan_path(Point2(state.x, state.y), goal, world, nav.resolution, nav.clearance, strict_start=False)
    except NoPathFound as exc:
        log.info("%s: %s", action, exc)
        return _failure(action, t0, state, FailureReason.PATH_BLOCKED), state, []
    wps = path.waypoints
    segment: list[VesselState] = []
    progress = 0
    deviation_time = 0.0
    while True:
        if len(wps) == 1:
            return _success(action, t0, state, path=path), state, segment
        verdict = monitor(state, path, progress, state.t - t0, nav, deviation_time)
        if verdict.kind is VerdictKind.GOAL_REACHED:
            return _success(action, t0, state, path=path), state, segment
        if verdict.kind is VerdictKind.FAILED:
            return _failure(action, t0, state, verdict.reason, path=path), state, segment
        if verdict.kind is VerdictKind.WAYPOINT_REACHED:
            progress += 1
        if state.t >= deadline:
            return _failure(action, t0, state, FailureReason.TIMEOUT, path=path), state, segment
        cmd = autopilot.follow(state, path, progress, config.dt)
        state = step(state, cmd, world.disturbance, params, config.dt)
        segment.append(state)
        e = cross_track_error(Point2(state.x, state.y), wps[progress], wps[progress + 1])
        deviation_time = deviation_time + config.dt if abs(e) > nav.deviation_limit else 0.0


def _record_data(action, world, state, params, config, autopilot, deadline):
    t0 = state.t
    heading = world.station(action.station).approach_heading
    segment: list[VesselState] = []
    while True:
        err = abs(wrap_angle(state.psi - heading))
        if err <= config.align_tolerance:
            rec = DataRecord(action.station, state.t, (state.x, state.y, state.psi), err)
            return _success(action, t0, state, record=rec), state, segment
        if state.t - t0 > config.align_timeout or state.t >= deadline:
            return _failure(action, t0, state, FailureReason.TIMEOUT), state, segment
        cmd = autopilot.hold_heading(state, heading, config.dt)
        state = step(state, cmd, world.disturbance, params, config.dt)
        segment.append(state)


def execute_action(
    action: Action,
    world: WorldState,
    state: VesselState,
    params: VesselParams,
    config: ExecutorConfig,
    deadline: float = math.inf,
) -> tuple[ActionOutcome, VesselState, list[VesselState]]:
    """Run one symbolic action in closed loop; failures are encoded in the outcome."""
    autopilot = Autopilot(config.nav, params)
    if action.kind is ActionKind.MOVE_TO:
        return _move_to(action, world, state, params, config, autopilot, deadline)
    return _record_data(action, world, state, params, config, autopilot, deadline)


def required_stations(report: MissionReport, mission: MissionSpec, world: WorldState) -> tuple[str, ...]:
    # free-text missions are only interpretable by the planner: trust its first plan
    if mission.structured is None and report.plans:
        return report.plans[0].stations_in_order
    return mission.required_stations(world)


def completion_check(report: MissionReport, mission: MissionSpec, world: WorldState) -> bool:
    """True when every required station is recorded or was given up as unreachable."""
    done = set(report.recorded_stations) | set(report.unreachable)
    return all(s in done for s in required_stations(report, mission, world))


def run_mission(
    world: WorldState,
    mission: MissionSpec,
    backend: PlanBackend,
    params: VesselParams,
    config: ExecutorConfig,
    initial_state: VesselState,
    template: str | None = None,
    capabilities: CapabilitySet = DEFAULT_CAPABILITIES,
) -> MissionReport:
    """Plan, execute, replan on failure, and publish a final status. Never raises PlanError."""
    template = template if template is not None else default_template()
    report = MissionReport(mission=mission, backend=backend.name)
    state = initial_state
    report.trajectory.append(state)
    request = PlanRequest(world, mission, Point2(state.x, state.y))
    replans = 0

    def remaining() -> tuple[str, ...]:
        done = set(report.recorded_stations) | set(report.unreachable)
        return tuple(s for s in report.required if s not in done)

    try:
        prompt = build_prompt(template, world, state, mission, None, params, capabilities)
        plan = generate_plan(backend, prompt, request, capabilities)
    except PlanError as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        report.termination = "planning failed"
        return _finish(report, mission, world)

    while True:
        episode = len(report.plans)
        report.plans.append(plan)
        if episode == 0:
            report.required = required_stations(report, mission, world)
        log.info("plan episode %d: %s", episode, ", ".join(map(str, plan.steps)))
        failed: ActionOutcome | None = None
        for action in plan.steps:
            outcome, state, segment = execute_action(action, world, state, params, config, config.max_sim_time)
            outcome = replace(outcome, episode=episode)
            report.outcomes.append(outcome)
            report.trajectory.extend(segment)
            if outcome.record is not None:
                report.records.append(outcome.record)
            if not outcome.succeeded:
                failed = outcome
                break
        if state.t >= config.max_sim_time:
            report.termination = "simulation time limit reached"
            break

        completed = tuple(dict.fromkeys(report.recorded_stations))
        here = Point2(state.x, state.y)
        request = replace(request, start=here, completed=completed, unreachable=tuple(report.unreachable))
        try:
            if failed is not None:
                replans += 1
                fb = FeedbackReport(
                    failed.action, failed.reason, here, replans,
                    completed=completed,
                    remaining=remaining(),
                )
                report.feedback.append(fb)
                try:
                    plan = replan_with_feedback(
                        backend, template, state, request, fb, config.max_replans, params, capabilities
                    )
                except ReplanBudgetExhausted as exc:
                    report.unreachable.append(failed.action.station)
                    report.errors.append(f"{type(exc).__name__}: {exc}")
                    report.termination = "replan budget exhausted"
                    break
                request = request.demote(failed.action.station)
            else:
                if completion_check(report, mission, world):
                    report.termination = "all plan steps succeeded"
                    break
                # plan ran out without covering every required station
                replans += 1
                if replans > config.max_replans:
                    report.termination = "replan budget exhausted"
                    break
                prompt = build_prompt(template, world, state, mission, None, params, capabilities)
                prompt = prompt.with_note(
                    f"Stations already inspected: {', '.join(completed) or 'none'}. "
                    f"Plan only for the remaining stations: {', '.join(remaining())}."
                )
                plan = generate_plan(backend, prompt, request, capabilities)
        except PlanError as exc:
            report.errors.append(f"{type(exc).__name__}: {exc}")
            report.termination = "planning failed"
            break
    return _finish(report, mission, world)


def _finish(report: MissionReport, mission: MissionSpec, world: WorldState) -> MissionReport:
    if not report.required:
        report.required = mission.required_stations(world)
    recorded = set(report.recorded_stations)
    complete = all(s in recorded for s in report.required)
    report.final_status = MISSION_COMPLETED if complete else MISSION_INCOMPLETE
    log.info("%s (%s)", report.final_status, report.termination)
    return report
