"""Run-directory artifacts: mission report JSON, trajectory CSV, plan files."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path as FsPath

from .executor import ActionOutcome, MissionReport
from .planning import CapabilitySet, DEFAULT_CAPABILITIES, FeedbackReport, VisitOrdered, plan_to_dict

REPORT_FORMAT_VERSION = 1
TRAJECTORY_COLUMNS = ("t", "x", "y", "psi", "u", "v", "r")


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the same directory and rename into place."""
    path = FsPath(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _r(v: float) -> float:
    return round(v, 6)


def _structured_label(report: MissionReport) -> str | None:
    s = report.mission.structured
    if s is None:
        return None
    if isinstance(s, VisitOrdered):
        return "ordered:" + ",".join(s.station_ids)
    return "visit_all"


def _outcome(o: ActionOutcome) -> dict:
    return {
        "episode": o.episode,
        "action": {"kind": o.action.kind.value, "station": o.action.station},
        "status": o.status,
        "reason": o.reason,
        "start_time": _r(o.start_time),
        "end_time": _r(o.end_time),
        "end_location": [_r(o.end_location.x), _r(o.end_location.y)],
        "path": None if o.path is None else [[_r(p.x), _r(p.y)] for p in o.path.waypoints],
    }


def _feedback(f: FeedbackReport) -> dict:
    return {
        "failed_action": {"kind": f.failed_action.kind.value, "station": f.failed_action.station},
        "reason": f.reason,
        "usv_current_location": [_r(f.usv_current_location.x), _r(f.usv_current_location.y)],
        "attempt": f.attempt,
        "completed": list(f.completed),
        "remaining": list(f.remaining),
    }


def report_to_dict(
    report: MissionReport,
    capabilities: CapabilitySet = DEFAULT_CAPABILITIES,
    metadata: dict | None = None,
) -> dict:
    return {
        "format_version": REPORT_FORMAT_VERSION,
        "final_status": report.final_status,
        "termination": report.termination,
        "backend": report.backend,
        "mission": {"text": report.mission.raw_text, "structured": _structured_label(report)},
        "required_stations": list(report.required),
        "unreachable": list(report.unreachable),
        "errors": list(report.errors),
        "plans": [plan_to_dict(p, capabilities) for p in report.plans],
        "feedback": [_feedback(f) for f in report.feedback],
        "outcomes": [_outcome(o) for o in report.outcomes],
        "records": [
            {
                "station": r.station,
                "timestamp": _r(r.timestamp),
                "pose": [_r(v) for v in r.pose],
                "alignment_error": _r(r.alignment_error),
            }
            for r in report.records
        ],
        "trajectory": [[_r(v) for v in s.as_row()] for s in report.trajectory],
        "metadata": metadata or {},
    }


def report_json(report: MissionReport, metadata: dict | None = None) -> str:
    return json.dumps(report_to_dict(report, metadata=metadata), indent=1) + "\n"


def trajectory_csv(report: MissionReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for s in report.trajectory:
        w.writerow([f"{v:.6f}" for v in s.as_row()])
    return buf.getvalue()


def write_run_artifacts(
    out_dir: str | os.PathLike,
    report: MissionReport,
    metadata: dict | None = None,
    capabilities: CapabilitySet = DEFAULT_CAPABILITIES,
) -> list[FsPath]:
    out = FsPath(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, plan in enumerate(report.plans):
        p = out / f"plan_{i}.json"
        write_atomic(p, json.dumps(plan_to_dict(plan, capabilities), indent=2) + "\n")
        written.append(p)
    p = out / "trajectory.csv"
    write_atomic(p, trajectory_csv(report))
    written.append(p)
    p = out / "mission_report.json"
    write_atomic(p, report_json(report, metadata))
    written.append(p)
    return written
