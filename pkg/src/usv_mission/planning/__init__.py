"""Prompt construction, plan backends, plan parsing and replanning."""

from .backends import (
    BackendError,
    HeuristicBackend,
    PlanBackend,
    PlanRejected,
    PlanRequest,
    RemoteBackend,
    generate_plan,
    replan_with_feedback,
)
from .heuristic import greedy_order, heuristic_plan, tour_length
from .plan import (
    DEFAULT_CAPABILITIES,
    Action,
    ActionKind,
    Capability,
    CapabilitySet,
    FeedbackReport,
    InvariantError,
    MissionSpec,
    PlanError,
    PlanParseError,
    ReplanBudgetExhausted,
    SchemaError,
    SymbolicPlan,
    UnknownAction,
    UnknownTarget,
    VisitAll,
    VisitOrdered,
    move_to,
    parse_mission_shorthand,
    parse_plan,
    plan_to_dict,
    record_data,
    serialize_plan,
)
from .prompt import PromptBundle, TemplateError, build_prompt, default_template

__all__ = [
    "DEFAULT_CAPABILITIES", "Action", "ActionKind", "BackendError", "Capability", "CapabilitySet",
    "FeedbackReport", "HeuristicBackend", "InvariantError", "MissionSpec", "PlanBackend", "PlanError",
    "PlanParseError", "PlanRejected", "PlanRequest", "PromptBundle", "RemoteBackend",
    "ReplanBudgetExhausted", "SchemaError", "SymbolicPlan", "TemplateError", "UnknownAction",
    "UnknownTarget", "VisitAll", "VisitOrdered", "build_prompt", "default_template", "generate_plan",
    "greedy_order", "heuristic_plan", "move_to", "parse_mission_shorthand", "parse_plan",
    "plan_to_dict", "record_data", "replan_with_feedback", "serialize_plan", "tour_length",
]
