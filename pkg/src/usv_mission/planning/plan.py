"""Mission, action and plan types plus the JSON plan wire format."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Union

from ..world import Point2, ValidationError, WorldState


class PlanError(Exception):
    """Base class for planning failures."""


class PlanParseError(PlanError):
    """Backend output could not be turned into a valid SymbolicPlan."""


class SchemaError(PlanParseError):
    pass


class UnknownAction(PlanParseError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown action {name!r}")


class UnknownTarget(PlanParseError):
    def __init__(self, target: str):
        self.target = target
        super().__init__(f"unknown target {target!r}")


class InvariantError(PlanParseError):
    pass


class ActionKind(str, enum.Enum):
    MOVE_TO = "MoveTo"
    RECORD_DATA = "RecordData"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    station: str

    def __str__(self) -> str:
        return f"{self.kind.value}({self.station})"


def move_to(station: str) -> Action:
    return Action(ActionKind.MOVE_TO, station)


def record_data(station: str) -> Action:
    return Action(ActionKind.RECORD_DATA, station)


@dataclass(frozen=True)
class Capability:
    name: str
    kind: ActionKind
    description: str = ""


@dataclass(frozen=True)
class CapabilitySet:
    capabilities: tuple[Capability, ...]

    def __post_init__(self):
        if not self.capabilities:
            raise ValueError("capability set must not be empty")
        names = [c.name for c in self.capabilities]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate capability names in {names}")

    def kind_of(self, name: str) -> ActionKind:
        for c in self.capabilities:
            if c.name == name:
                return c.kind
        raise UnknownAction(name)

    def name_of(self, kind: ActionKind) -> str:
        for c in self.capabilities:
            if c.kind is kind:
                return c.name
        raise KeyError(kind)


DEFAULT_CAPABILITIES = CapabilitySet((
    Capability(
        "move_to_docking_station", ActionKind.MOVE_TO,
        "navigate to the approach point of the target docking station",
    ),
    Capability(
        "record_data", ActionKind.RECORD_DATA,
        "align with the target docking station and record camera data; "
        "must directly follow move_to_docking_station for the same target",
    ),
))


@dataclass(frozen=True)
class VisitAll:
    pass


@dataclass(frozen=True)
class VisitOrdered:
    station_ids: tuple[str, ...]


StructuredMission = Union[VisitAll, VisitOrdered]


@dataclass(frozen=True)
class MissionSpec:
    raw_text: str
    structured: StructuredMission | None = None

    def required_stations(self, world: WorldState) -> tuple[str, ...]:
        if isinstance(self.structured, VisitOrdered):
            return self.structured.station_ids
        return world.station_ids


def validate_mission(mission: MissionSpec, world: WorldState) -> None:
    if not mission.raw_text.strip():
        raise ValidationError("mission.text", "empty mission text")
    if isinstance(mission.structured, VisitOrdered):
        ids = mission.structured.station_ids
        if not ids:
            raise ValidationError("mission.structured", "ordered mission names no stations")
        if len(set(ids)) != len(ids):
            raise ValidationError("mission.structured", f"duplicate station in {list(ids)}")
        for sid in ids:
            if sid not in world.station_ids:
                raise ValidationError("mission.structured", f"unknown station {sid!r}")


def parse_mission_shorthand(text: str) -> StructuredMission | None:
    """``visit_all`` or ``ordered:ds_1,ds_2``; anything else is free text (None)."""
    t = text.strip()
    if t == "visit_all":
        return VisitAll()
    if t.startswith("ordered:"):
        ids = tuple(s.strip() for s in t[len("ordered:"):].split(",") if s.strip())
        return VisitOrdered(ids)
    return None


def describe_structured(structured: StructuredMission) -> str:
    if isinstance(structured, VisitOrdered):
        return f"Inspect docking stations {', '.join(structured.station_ids)} in this order and record data."
    return "Inspect all port terminals and record data."


@dataclass(frozen=True)
class SymbolicPlan:
    steps: tuple[Action, ...]
    reasoning: str

    def __post_init__(self):
        check_plan_invariants(self.steps)

    @property
    def stations_in_order(self) -> tuple[str, ...]:
        return tuple(a.station for a in self.steps if a.kind is ActionKind.RECORD_DATA)


def check_plan_invariants(steps) -> None:
    if not steps:
        raise InvariantError("plan has no steps")
    for i, a in enumerate(steps):
        if i and steps[i - 1] == a:
            raise InvariantError(f"step {i} repeats {a}")
        if a.kind is ActionKind.RECORD_DATA and (i == 0 or steps[i - 1] != move_to(a.station)):
            raise InvariantError(f"step {i} {a} is not immediately preceded by MoveTo({a.station})")


def visit_steps(station_ids) -> tuple[Action, ...]:
    steps: list[Action] = []
    for sid in station_ids:
        steps += [move_to(sid), record_data(sid)]
    return tuple(steps)


class ReplanBudgetExhausted(PlanError):
    pass


@dataclass(frozen=True)
class FeedbackReport:
    failed_action: Action
    reason: str  # a FailureReason value: PathBlocked | Timeout | ControlDeviation
    usv_current_location: Point2
    attempt: int
    completed: tuple[str, ...] = ()
    remaining: tuple[str, ...] = ()

    def __post_init__(self):
        if self.attempt < 1:
            raise ValueError("attempt must be >= 1")


# --- wire format -------------------------------------------------------------


def plan_to_dict(plan: SymbolicPlan, capabilities: CapabilitySet = DEFAULT_CAPABILITIES) -> dict:
    return {
        "plan": [{"action": capabilities.name_of(a.kind), "target": a.station} for a in plan.steps],
        "reasoning": plan.reasoning,
    }


def serialize_plan(plan: SymbolicPlan, capabilities: CapabilitySet = DEFAULT_CAPABILITIES) -> str:
    return json.dumps(plan_to_dict(plan, capabilities), indent=2)


def extract_json_object(raw: str) -> dict:
    """First decodable JSON object embedded anywhere in ``raw``."""
    decoder = json.JSONDecoder()
    idx = raw.find("{")
    while idx != -1:
        try:
            obj, _ = decoder.raw_decode(raw, idx)
        except json.JSONDecodeError:
            pass
        else:
            if isinstance(obj, dict):
                return obj
        idx = raw.find("{", idx + 1)
    raise SchemaError("no JSON object found in backend response")


def parse_plan(raw: str, world: WorldState, capabilities: CapabilitySet = DEFAULT_CAPABILITIES) -> SymbolicPlan:
    """Parse and validate backend output; violations are rejected, never repaired."""
    if not isinstance(raw, str):
        raise SchemaError(f"backend response must be text, got {type(raw).__name__}")
    obj = extract_json_object(raw)
    if "plan" not in obj:
        raise SchemaError("missing top-level key 'plan'")
    if "reasoning" not in obj:
        raise SchemaError("missing top-level key 'reasoning'")
    items, reasoning = obj["plan"], obj["reasoning"]
    if not isinstance(items, list):
        raise SchemaError("'plan' must be an array")
    if not isinstance(reasoning, str):
        raise SchemaError("'reasoning' must be a string")
    known = set(world.station_ids)
    steps = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise SchemaError(f"plan[{i}] must be an object")
        action, target = item.get("action"), item.get("target")
        if not isinstance(action, str):
            raise SchemaError(f"plan[{i}].action must be a string")
        if not isinstance(target, str):
            raise SchemaError(f"plan[{i}].target must be a string")
        kind = capabilities.kind_of(action)
        if target not in known:
            raise UnknownTarget(target)
        steps.append(Action(kind, target))
    check_plan_invariants(steps)
    return SymbolicPlan(tuple(steps), reasoning)
