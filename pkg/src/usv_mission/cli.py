"""Command-line entry point: ``usv-mission run --scenario lake4.yaml ...``."""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path as FsPath

from .executor import MISSION_COMPLETED, run_mission
from .planning import (
    BackendError,
    HeuristicBackend,
    MissionSpec,
    RemoteBackend,
    parse_mission_shorthand,
)
from .planning.plan import describe_structured, validate_mission
from .plot import render_plot
from .report import write_atomic, write_run_artifacts
from .scenario import ParseError, Scenario, bundled_scenario, load_scenario
from .world import ValidationError

EXIT_OK = 0
EXIT_INCOMPLETE = 1
EXIT_CONFIG = 2

log = logging.getLogger("usv_mission")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    scenario: FsPath
    mission: str | None
    backend: str
    seed: int
    out: FsPath | None
    plot: bool
    dt: float | None = None
    max_sim_time: float | None = None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="usv-mission", description="Plan and simulate USV inspection missions.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one mission and write its artifacts")
    run.add_argument("--scenario", required=True,
                     help="scenario YAML path, or the name of a bundled scenario (lake4, lake4_blocked)")
    run.add_argument("--mission", help="mission text, or shorthand 'visit_all' / 'ordered:ds_1,ds_2'")
    run.add_argument("--backend", choices=("heuristic", "remote"), default="heuristic")
    run.add_argument("--seed", type=int, default=0, help="recorded in the report; the simulation is deterministic")
    run.add_argument("--out", help="output directory (default: runs/<scenario name>)")
    run.add_argument("--plot", action="store_true", help="also write plot.svg")
    run.add_argument("--dt", type=float, help="integration step override (s)")
    run.add_argument("--max-sim-time", type=float, help="simulated time limit override (s)")
    run.add_argument("-v", "--verbose", action="store_true")
    return parser


def _resolve_scenario(arg: str) -> FsPath:
    p = FsPath(arg)
    if p.exists() or p.suffix:
        return p
    bundled = bundled_scenario(arg)
    return bundled if bundled.exists() else p


def _mission_override(text: str, scenario: Scenario) -> MissionSpec:
    structured = parse_mission_shorthand(text)
    if structured is not None:
        mission = MissionSpec(describe_structured(structured), structured)
    else:
        mission = MissionSpec(text, None)
    validate_mission(mission, scenario.world)
    return mission


def _prepare(cfg: RunConfig) -> tuple[Scenario, MissionSpec, object]:
    scenario = load_scenario(cfg.scenario)
    mission = _mission_override(cfg.mission, scenario) if cfg.mission else scenario.mission
    executor = scenario.executor
    try:
        if cfg.dt is not None:
            executor = replace(executor, dt=cfg.dt)
        if cfg.max_sim_time is not None:
            executor = replace(executor, max_sim_time=cfg.max_sim_time)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    scenario = replace(scenario, mission=mission, executor=executor)
    if cfg.backend == "heuristic":
        if mission.structured is None:
            raise ConfigError(
                "the heuristic backend needs a structured mission; use --mission visit_all or ordered:<ids>"
            )
        backend = HeuristicBackend()
    else:
        rc = scenario.remote
        try:
            backend = RemoteBackend.from_env(rc.base_url, rc.model, rc.api_key_env, timeout=rc.timeout)
        except BackendError as exc:
            raise ConfigError(str(exc)) from exc
    return scenario, mission, backend


def execute(cfg: RunConfig) -> int:
    try:
        scenario, mission, backend = _prepare(cfg)
    except (ParseError, ValidationError, ConfigError) as exc:
        print(f"usv-mission: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = cfg.out or FsPath("runs") / scenario.name
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"usv-mission: error: cannot create output directory {out}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    report = run_mission(
        scenario.world, mission, backend, scenario.params, scenario.executor, scenario.initial_state
    )
    metadata = {
        "scenario": scenario.name,
        "seed": cfg.seed,
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    write_run_artifacts(out, report, metadata)
    transcript = getattr(backend, "transcript", None)
    if transcript is not None:
        write_atomic(out / "transcript.json", json.dumps(transcript, indent=2) + "\n")
    if cfg.plot:
        svg = render_plot(report, scenario.world, scenario.executor.standoff, title=mission.raw_text)
        write_atomic(out / "plot.svg", svg)

    print(f"{report.final_status}: recorded {', '.join(report.recorded_stations) or 'nothing'}"
          + (f"; unreachable {', '.join(report.unreachable)}" if report.unreachable else ""))
    print(f"artifacts written to {out}")
    return EXIT_OK if report.final_status == MISSION_COMPLETED else EXIT_INCOMPLETE


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    cfg = RunConfig(
        scenario=_resolve_scenario(args.scenario),
        mission=args.mission,
        backend=args.backend,
        seed=args.seed,
        out=FsPath(args.out) if args.out else None,
        plot=args.plot,
        dt=args.dt,
        max_sim_time=args.max_sim_time,
    )
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
