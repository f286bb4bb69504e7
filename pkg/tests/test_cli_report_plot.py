import csv
import json
import os
import re
import subprocess
import sys

import pytest

from usv_mission import cli
from usv_mission.dynamics import VesselState
from usv_mission.executor import MissionReport, run_mission
from usv_mission.planning import HeuristicBackend, MissionSpec, SymbolicPlan, VisitAll, move_to, record_data
from usv_mission.plot import planned_waypoints, render_plot
from usv_mission.report import TRAJECTORY_COLUMNS, report_to_dict, trajectory_csv, write_atomic


@pytest.fixture(scope="module")
def lake_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("lake")
    code = cli.main(["run", "--scenario", "lake4", "--mission", "visit_all", "--out", str(out), "--plot"])
    return code, out


def test_lake_run_exit_and_artifacts(lake_run):
    code, out = lake_run
    assert code == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["mission_report.json", "plan_0.json", "plot.svg", "trajectory.csv"]
    report = json.loads((out / "mission_report.json").read_text())
    assert report["final_status"] == "Mission Completed"
    assert len(report["records"]) == 4
    assert report["metadata"]["scenario"] == "lake4" and report["metadata"]["seed"] == 0
    plan = json.loads((out / "plan_0.json").read_text())
    assert set(plan) == {"plan", "reasoning"} and len(plan["plan"]) == 8


def test_trajectory_csv_matches_report(lake_run):
    _, out = lake_run
    rows = list(csv.reader((out / "trajectory.csv").open()))
    assert tuple(rows[0]) == TRAJECTORY_COLUMNS
    report = json.loads((out / "mission_report.json").read_text())
    assert len(rows) - 1 == len(report["trajectory"])
    assert float(rows[-1][0]) == pytest.approx(report["trajectory"][-1][0])


def test_blocked_run_exits_incomplete(tmp_path):
    code = cli.main(["run", "--scenario", "lake4_blocked", "--out", str(tmp_path)])
    assert code == 1
    report = json.loads((tmp_path / "mission_report.json").read_text())
    assert report["unreachable"] == ["ds_1"] and report["final_status"] == "Mission Incomplete"
    assert len(list(tmp_path.glob("plan_*.json"))) == len(report["plans"]) >= 2


def test_missing_scenario_exits_2_without_output(tmp_path, capsys):
    out = tmp_path / "never"
    assert cli.main(["run", "--scenario", str(tmp_path / "nope.yaml"), "--out", str(out)]) == 2
    assert "error" in capsys.readouterr().err
    assert not out.exists()


def test_invalid_scenario_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("format_version: 1\nbounds: {xmin: 0, ymin: 0, xmax: -5, ymax: 10}\n")
    assert cli.main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "bounds" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["--mission", "Inspect everything please"],
    ["--mission", "ordered:ds_1,ds_9"],
    ["--dt", "0"],
])
def test_config_errors_exit_2(tmp_path, argv):
    out = tmp_path / "o"
    assert cli.main(["run", "--scenario", "lake4", "--out", str(out), *argv]) == 2
    assert not out.exists()


def test_remote_without_key_exits_2(tmp_path, monkeypatch):
    monkeypatch.delenv("OPENAI_API_KEY", raising=False)
    assert cli.main(["run", "--scenario", "lake4", "--backend", "remote", "--out", str(tmp_path / "o")]) == 2


def test_ordered_shorthand(tmp_path):
    assert cli.main(["run", "--scenario", "lake4", "--mission", "ordered:ds_2,ds_1", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "mission_report.json").read_text())
    assert [r["station"] for r in report["records"]] == ["ds_2", "ds_1"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "usv_mission", "run", "--scenario", str(tmp_path / "x.yaml")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2 and "usv-mission: error" in proc.stderr


# --- atomic writes -------------------------------------------------------------------------------

def test_write_atomic_replaces_whole_file(tmp_path):
    target = tmp_path / "a.json"
    write_atomic(target, "first\n")
    write_atomic(target, "second\n")
    assert target.read_text() == "second\n"
    assert [p.name for p in tmp_path.iterdir()] == ["a.json"]


def test_interrupted_write_keeps_old_content(tmp_path, monkeypatch):
    target = tmp_path / "a.json"
    write_atomic(target, '{"ok": true}\n')

    def fail(*_):
        raise OSError("disk gone")

    monkeypatch.setattr(os, "replace", fail)
    with pytest.raises(OSError):
        write_atomic(target, '{"ok": false, "padding": "' + "x" * 10000 + '"}\n')
    assert json.loads(target.read_text()) == {"ok": True}
    assert [p.name for p in tmp_path.iterdir()] == ["a.json"]


# --- plot ---------------------------------------------------------------------------------------

def _one_point_report():
    r = MissionReport(MissionSpec("all", VisitAll()), "heuristic")
    r.trajectory = [VesselState(x=15.0, y=20.0)]
    r.plans = [SymbolicPlan((move_to("ds_1"), record_data("ds_1"), move_to("ds_2"), record_data("ds_2")), "r")]
    return r


def test_plot_single_point_has_markers_only(lake4):
    svg = render_plot(_one_point_report(), lake4.world, lake4.executor.standoff)
    assert "<polyline" not in svg
    assert svg.count('class="planned-waypoint"') == 2
    assert svg.count('class="station"') == 4 and "ds_3" in svg


def test_plot_requires_trajectory(lake4):
    r = _one_point_report()
    r.trajectory = []
    with pytest.raises(ValueError):
        render_plot(r, lake4.world, lake4.executor.standoff)


def test_plot_structure_for_full_run(lake4, lake_run):
    _, out = lake_run
    svg = (out / "plot.svg").read_text()
    report = json.loads((out / "mission_report.json").read_text())
    assert svg.count('class="planned-waypoint"') == 4
    (points,) = re.findall(r'<polyline class="executed" points="([^"]*)"', svg)
    n = len(points.split())
    assert n == len(report["trajectory"])  # n points, n - 1 segments
    assert svg.count("<polyline") == 1 and 'class="legend"' in svg


def test_plot_is_deterministic(lake4):
    r = run_mission(lake4.world, lake4.mission, HeuristicBackend(), lake4.params, lake4.executor,
                    lake4.initial_state)
    a = render_plot(r, lake4.world, lake4.executor.standoff, title="t")
    b = render_plot(r, lake4.world, lake4.executor.standoff, title="t")
    assert a == b


def test_planned_waypoints_dedupe(lake4):
    r = _one_point_report()
    r.plans.append(SymbolicPlan((move_to("ds_2"), record_data("ds_2"), move_to("ds_3")), "again"))
    assert [s for s, _ in planned_waypoints(r, lake4.world, 10.0)] == ["ds_1", "ds_2", "ds_3"]


def test_report_dict_shape(lake4):
    d = report_to_dict(_one_point_report(), metadata={"seed": 1})
    assert d["final_status"] == "Mission Incomplete"
    assert d["trajectory"] == [[0.0, 15.0, 20.0, 0.0, 0.0, 0.0, 0.0]]
    assert trajectory_csv(_one_point_report()).splitlines()[0] == "t,x,y,psi,u,v,r"
