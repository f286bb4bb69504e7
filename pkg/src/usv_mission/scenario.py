"""Scenario files: YAML documents describing the lake, vessel, mission and tuning."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path as FsPath
from typing import Any

import yaml

from .dynamics import VesselParams, VesselState
from .executor import ExecutorConfig
from .navigation import NavConfig
from .planning.plan import MissionSpec, describe_structured, parse_mission_shorthand, validate_mission
from .world import (
    Bounds,
    CircleObstacle,
    Disturbance,
    DockingStation,
    Point2,
    PolygonObstacle,
    ValidationError,
    WorldState,
    approach_point,
    is_collision_free,
    validate_world,
    wrap_angle,
)

FORMAT_VERSION = 1


class ParseError(ValueError):
    """The scenario file is missing or is not a well-formed YAML mapping."""


@dataclass(frozen=True)
class RemoteConfig:
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4"
    timeout: float = 60.0
    api_key_env: str = "OPENAI_API_KEY"


@dataclass(frozen=True)
class Scenario:
    name: str
    world: WorldState
    mission: MissionSpec
    initial_state: VesselState
    params: VesselParams = field(default_factory=VesselParams)
    executor: ExecutorConfig = field(default_factory=ExecutorConfig)
    remote: RemoteConfig = field(default_factory=RemoteConfig)


def bundled_scenario(name: str) -> FsPath:
    """Path of a scenario shipped with the package (e.g. ``lake4``)."""
    return FsPath(str(resources.files("usv_mission.data").joinpath(f"{name}.yaml")))


def _mapping(obj: Any, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError(where, "expected a mapping")
    return obj


def _number(obj: dict, key: str, where: str, default: float | None = None) -> float:
    if key not in obj:
        if default is None:
            raise ValidationError(f"{where}.{key}", "missing")
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"{where}.{key}", f"expected a finite number, got {v!r}")
    return float(v)


def _pair(v: Any, where: str) -> tuple[float, float]:
    if (
        not isinstance(v, (list, tuple)) or len(v) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) and math.isfinite(c) for c in v)
    ):
        raise ValidationError(where, f"expected [x, y] numbers, got {v!r}")
    return float(v[0]), float(v[1])


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ValidationError(where, f"unknown key(s): {', '.join(map(str, extra))}")


def _dataclass_section(cls, obj: Any, where: str, skip: tuple[str, ...] = ()):
    obj = _mapping(obj or {}, where)
    names = {f.name for f in fields(cls)} - set(skip)
    _check_keys(obj, names, where)
    kwargs = {}
    for key, value in obj.items():
        if isinstance(value, bool):
            raise ValidationError(f"{where}.{key}", "expected a number")
        if key == "max_replans":
            if not isinstance(value, int):
                raise ValidationError(f"{where}.{key}", "expected an integer")
            kwargs[key] = value
        else:
            kwargs[key] = _number(obj, key, where)
    return kwargs


def _build(cls, kwargs: dict, where: str, **extra):
    try:
        return cls(**kwargs, **extra)
    except ValueError as exc:
        raise ValidationError(where, str(exc)) from exc


def _station(obj: Any, where: str) -> DockingStation:
    obj = _mapping(obj, where)
    _check_keys(obj, {"id", "x", "y", "z", "l", "w", "h", "approach_heading"}, where)
    sid = obj.get("id")
    if not isinstance(sid, str) or not sid:
        raise ValidationError(f"{where}.id", "expected a non-empty string")
    return DockingStation(
        id=sid,
        position=Point2(_number(obj, "x", where), _number(obj, "y", where)),
        z=_number(obj, "z", where, 0.0),
        length=_number(obj, "l", where),
        width=_number(obj, "w", where),
        height=_number(obj, "h", where),
        approach_heading=_number(obj, "approach_heading", where),
    )


def _obstacle(obj: Any, where: str):
    obj = _mapping(obj, where)
    kind = obj.get("type")
    if kind == "circle":
        _check_keys(obj, {"type", "x", "y", "radius"}, where)
        return CircleObstacle(Point2(_number(obj, "x", where), _number(obj, "y", where)), _number(obj, "radius", where))
    if kind == "polygon":
        _check_keys(obj, {"type", "vertices"}, where)
        verts = obj.get("vertices")
        if not isinstance(verts, list):
            raise ValidationError(f"{where}.vertices", "expected a list of [x, y]")
        return PolygonObstacle(tuple(Point2(*_pair(v, f"{where}.vertices[{i}]")) for i, v in enumerate(verts)))
    raise ValidationError(f"{where}.type", f"expected 'circle' or 'polygon', got {kind!r}")


def _mission(obj: Any) -> MissionSpec:
    obj = _mapping(obj, "mission")
    _check_keys(obj, {"text", "structured"}, "mission")
    structured_raw = obj.get("structured")
    structured = None
    if structured_raw is not None:
        if not isinstance(structured_raw, str):
            raise ValidationError("mission.structured", "expected 'visit_all' or 'ordered:<id>,<id>,...'")
        structured = parse_mission_shorthand(structured_raw)
        if structured is None:
            raise ValidationError("mission.structured", f"unrecognized form {structured_raw!r}")
    text = obj.get("text")
    if text is None and structured is not None:
        text = describe_structured(structured)
    if not isinstance(text, str):
        raise ValidationError("mission.text", "expected a string")
    return MissionSpec(text, structured)


def parse_scenario(doc: Any, name: str = "scenario") -> Scenario:
    doc = _mapping(doc, "<root>")
    _check_keys(
        doc,
        {"format_version", "name", "bounds", "stations", "obstacles", "disturbance",
         "vessel", "mission", "control", "executor", "backend"},
        "<root>",
    )
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValidationError("format_version", f"expected {FORMAT_VERSION}, got {doc.get('format_version')!r}")

    b = _mapping(doc.get("bounds"), "bounds")
    _check_keys(b, {"xmin", "ymin", "xmax", "ymax"}, "bounds")
    bounds = Bounds(*(_number(b, k, "bounds") for k in ("xmin", "ymin", "xmax", "ymax")))

    stations = doc.get("stations") or []
    obstacles = doc.get("obstacles") or []
    if not isinstance(stations, list):
        raise ValidationError("stations", "expected a list")
    if not isinstance(obstacles, list):
        raise ValidationError("obstacles", "expected a list")
    d = _mapping(doc.get("disturbance") or {}, "disturbance")
    _check_keys(d, {"current", "wind_force"}, "disturbance")
    disturbance = Disturbance(
        current=_pair(d.get("current", [0.0, 0.0]), "disturbance.current"),
        wind_force=_pair(d.get("wind_force", [0.0, 0.0]), "disturbance.wind_force"),
    )
    world = WorldState(
        bounds=bounds,
        stations=tuple(_station(s, f"stations[{i}]") for i, s in enumerate(stations)),
        obstacles=tuple(_obstacle(o, f"obstacles[{i}]") for i, o in enumerate(obstacles)),
        disturbance=disturbance,
    )
    validate_world(world)

    vessel = _mapping(doc.get("vessel") or {}, "vessel")
    _check_keys(vessel, {"initial", "params"}, "vessel")
    init = _mapping(vessel.get("initial") or {}, "vessel.initial")
    _check_keys(init, {"x", "y", "psi"}, "vessel.initial")
    psi = _number(init, "psi", "vessel.initial", 0.0)
    initial = VesselState(
        x=_number(init, "x", "vessel.initial"), y=_number(init, "y", "vessel.initial"), psi=wrap_angle(psi)
    )
    params = _build(VesselParams, _dataclass_section(VesselParams, vessel.get("params"), "vessel.params"), "vessel.params")

    nav = _build(NavConfig, _dataclass_section(NavConfig, doc.get("control"), "control"), "control")
    executor = _build(
        ExecutorConfig,
        _dataclass_section(ExecutorConfig, doc.get("executor"), "executor", skip=("nav",)),
        "executor",
        nav=nav,
    )

    backend = _mapping(doc.get("backend") or {}, "backend")
    _check_keys(backend, {"remote"}, "backend")
    remote_raw = _mapping(backend.get("remote") or {}, "backend.remote")
    _check_keys(remote_raw, {f.name for f in fields(RemoteConfig)}, "backend.remote")
    for key in ("base_url", "model", "api_key_env"):
        if key in remote_raw and not isinstance(remote_raw[key], str):
            raise ValidationError(f"backend.remote.{key}", "expected a string")
    remote = RemoteConfig(**{
        **remote_raw,
        **({"timeout": _number(remote_raw, "timeout", "backend.remote")} if "timeout" in remote_raw else {}),
    })

    mission = _mission(doc.get("mission"))
    validate_mission(mission, world)

    start = Point2(initial.x, initial.y)
    if not is_collision_free(start, world, 0.0):
        raise ValidationError("vessel.initial", "initial position is outside bounds or inside an obstacle")
    for i, st in enumerate(world.stations):
        if not executor.standoff > max(st.length, st.width) / 2.0:
            raise ValidationError(
                f"stations[{i}]", f"standoff {executor.standoff} m does not clear the footprint of {st.id!r}"
            )
        goal, _ = approach_point(st, executor.standoff)
        if not is_collision_free(goal, world, nav.clearance):
            raise ValidationError(
                f"stations[{i}]", f"approach point of {st.id!r} is not collision-free at clearance {nav.clearance} m"
            )

    sname = doc.get("name", name)
    if not isinstance(sname, str):
        raise ValidationError("name", "expected a string")
    return Scenario(sname, world, mission, initial, params, executor, remote)


def load_scenario(path: str | FsPath) -> Scenario:
    p = FsPath(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read scenario {p}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"malformed scenario {p}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"scenario {p} must be a YAML mapping")
    return parse_scenario(doc, name=p.stem)
