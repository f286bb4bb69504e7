"""Prompt assembly: system description, mission goal, and controller feedback."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from ..dynamics import VesselParams, VesselState
from ..world import CircleObstacle, WorldState
from .plan import DEFAULT_CAPABILITIES, CapabilitySet, FeedbackReport, MissionSpec

REQUIRED_SLOTS = ("usv_current_location", "mission_goal")
_SLOT = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")

REASON_HINTS = {
    "PathBlocked": "no collision-free path to the target exists from the current location",
    "Timeout": "the vessel did not reach the target within its time budget",
    "ControlDeviation": "the vessel drifted too far from the planned path",
}


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    mission_text: str
    feedback_text: str | None = None

    @property
    def user_text(self) -> str:
        if self.feedback_text:
            return f"{self.mission_text}\n\n{self.feedback_text}"
        return self.mission_text

    def with_note(self, note: str) -> PromptBundle:
        fb = f"{self.feedback_text}\n\n{note}" if self.feedback_text else note
        return PromptBundle(self.system_text, self.mission_text, fb)


def default_template() -> str:
    return resources.files("usv_mission.data").joinpath("system_prompt.txt").read_text(encoding="utf-8")


def _fmt(v: float) -> str:
    return f"{v:.1f}"


def describe_usv(params: VesselParams) -> str:
    return (
        f"length {_fmt(params.length)} m, beam {_fmt(params.beam)} m; propulsion by two rotatable "
        f"pods for steerable thrust (max {params.rpm_max:.0f} rpm each); top speed "
        f"{_fmt(params.u_max)} m/s."
    )


def describe_environment(world: WorldState) -> str:
    b = world.bounds
    lines = [
        f"Lake area x in [{_fmt(b.xmin)}, {_fmt(b.xmax)}] m, y in [{_fmt(b.ymin)}, {_fmt(b.ymax)}] m.",
        f"{len(world.stations)} docking stations:",
    ]
    for s in world.stations:
        lines.append(
            f"- {s.id}: location (x={_fmt(s.position.x)}, y={_fmt(s.position.y)}, z={_fmt(s.z)}), "
            f"dimensions l={_fmt(s.length)} w={_fmt(s.width)} h={_fmt(s.height)} m"
        )
    if world.obstacles:
        lines.append(f"{len(world.obstacles)} known obstacles (moored boats):")
        for o in world.obstacles:
            if isinstance(o, CircleObstacle):
                lines.append(f"- circle at ({_fmt(o.center.x)}, {_fmt(o.center.y)}) radius {_fmt(o.radius)} m")
            else:
                pts = ", ".join(f"({_fmt(v.x)}, {_fmt(v.y)})" for v in o.vertices)
                lines.append(f"- polygon {pts}")
    return "\n".join(lines)


def describe_capabilities(capabilities: CapabilitySet) -> str:
    return "\n".join(f"- {c.name}(target): {c.description}" for c in capabilities.capabilities)


def describe_feedback(feedback: FeedbackReport, capabilities: CapabilitySet = DEFAULT_CAPABILITIES) -> str:
    a = feedback.failed_action
    loc = feedback.usv_current_location
    lines = [
        f"Feedback from the low-level controller (replanning attempt {feedback.attempt}): "
        f"the previous plan failed at {capabilities.name_of(a.kind)}({a.station}) "
        f"with reason {feedback.reason}: {REASON_HINTS.get(feedback.reason, 'unspecified failure')}.",
        f"The USV is now at (x={_fmt(loc.x)}, y={_fmt(loc.y)}).",
    ]
    if feedback.completed:
        lines.append(f"Stations already inspected: {', '.join(feedback.completed)}.")
    if feedback.remaining:
        lines.append(f"Stations still to inspect: {', '.join(feedback.remaining)}.")
    lines.append(
        "Produce a new plan for the remaining stations only that avoids the cause of this failure."
    )
    return "\n".join(lines)


def render_template(template: str, values: dict[str, str]) -> str:
    for slot in REQUIRED_SLOTS:
        if "{" + slot + "}" not in template:
            raise TemplateError(f"template lacks the {{{slot}}} slot")
    out = _SLOT.sub(lambda m: values.get(m.group(1), m.group(0)), template)
    # substituted values are not rescanned, so check the template itself
    missing = sorted({m.group(1) for m in _SLOT.finditer(template) if m.group(1) not in values})
    if missing:
        raise TemplateError(f"unfilled template slots: {', '.join(missing)}")
    return out


def build_prompt(
    template: str,
    world: WorldState,
    state: VesselState,
    mission: MissionSpec,
    feedback: FeedbackReport | None = None,
    params: VesselParams | None = None,
    capabilities: CapabilitySet = DEFAULT_CAPABILITIES,
) -> PromptBundle:
    values = {
        "usv_description": describe_usv(params or VesselParams()),
        "environment_description": describe_environment(world),
        "capabilities": describe_capabilities(capabilities),
        "usv_current_location": f"(x={_fmt(state.x)}, y={_fmt(state.y)}), heading {state.psi:.2f} rad",
        "mission_goal": mission.raw_text,
    }
    system_text = render_template(template, values)
    feedback_text = describe_feedback(feedback, capabilities) if feedback is not None else None
    return PromptBundle(system_text, f"Mission goal: {mission.raw_text}", feedback_text)
