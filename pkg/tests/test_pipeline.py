import json
from pathlib import Path

import pytest

from main import main
from src.lab.errors import ConfigError
from src.lab.io import read_csv
from src.services.config_service import get_settings, reset_settings
from src.services.graph.workflow import run
from src.utils.run_config import RunConfig, load_config_file, parse_run_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

GAUSS = {
    "command": "gauss-check",
    "curve": {"kind": "ellipse", "a": 2.0, "b": 1.0},
    "N": 128,
}


def _report(out: Path) -> dict:
    return json.loads((out / "report.json").read_text(encoding="utf-8"))


@pytest.fixture(autouse=True)
def fresh_settings():
    reset_settings()
    yield
    reset_settings()


def test_gauss_check_passes_and_writes_artifacts(tmp_path):
    state = run("gauss-check", GAUSS, {"out": str(tmp_path)})
    assert state["exit_code"] == 0
    assert state["summary"].startswith("PASS gauss-check:")
    assert "config_parser" in state["completed_tasks"]

    report = _report(tmp_path)
    for key in ("tool", "version", "command", "config_hash", "config", "result", "checks", "summary",
                "exit_code", "artifacts", "trace"):
        assert key in report
    assert report["tool"] == "dlplab"
    assert {c["name"] for c in report["checks"]} >= {"gauss", "double-layer-interior", "double-layer-exterior"}
    assert "out" not in report["config"]
    assert [m["seq"] for m in report["trace"]] == list(range(len(report["trace"])))

    csv_path = tmp_path / "gauss_probes.csv"
    first = csv_path.read_text(encoding="utf-8").splitlines()[0]
    assert first == f"# dlplab 0.1.0 config_hash={report['config_hash']}"
    assert {row["probe"] for row in read_csv(csv_path)} == {"interior", "exterior"}
    nodes = read_csv(tmp_path / "curve_nodes.csv")
    assert len(nodes) == GAUSS["N"]
    assert float(nodes[0]["t"]) == 0.0


def test_reports_are_byte_identical_across_runs(tmp_path):
    raw = load_config_file(CONFIGS / "sphere-check.json")
    first, second = tmp_path / "a", tmp_path / "b"
    run("sphere-check", raw, {"out": str(first)})
    run("sphere-check", raw, {"out": str(second)})
    assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()
    assert (first / "sphere.csv").read_bytes() == (second / "sphere.csv").read_bytes()


def test_invalid_config_exits_with_two(tmp_path):
    state = run("gauss-check", dict(GAUSS, N=100), {"out": str(tmp_path)})
    assert state["exit_code"] == 2
    assert state["summary"].startswith("FAIL gauss-check: cli:")
    report = _report(tmp_path)
    assert report["error"]["field"] == "N"
    assert report["result"] is None


def test_numerical_failure_exits_with_three(tmp_path):
    raw = load_config_file(CONFIGS / "match-melnikov.json")
    raw["params"]["c"] = 0.5
    state = run("match-melnikov", raw, {"out": str(tmp_path)})
    assert state["exit_code"] == 3
    assert state["error"]["module"] == "matching"
    assert state["error"]["error"] == "NotJordan"
    assert _report(tmp_path)["summary"].startswith("FAIL match-melnikov: matching:")


def test_tight_tolerance_is_a_check_failure(tmp_path):
    # sixteen nodes cannot resolve a thin ellipse
    raw = {"command": "gauss-check", "curve": {"kind": "ellipse", "a": 5.0, "b": 0.2}, "N": 16}
    state = run("gauss-check", raw, {"out": str(tmp_path)})
    assert state["exit_code"] == 1
    assert "gauss" in state["summary"] and state["summary"].startswith("FAIL")


def test_main_runs_a_shipped_config(tmp_path, capsys):
    code = main(["sphere-check", "--config", str(CONFIGS / "sphere-check.json"), "--out", str(tmp_path)])
    assert code == 0
    assert capsys.readouterr().out.startswith("PASS sphere-check:")
    assert (tmp_path / "report.json").exists()


def test_main_reports_missing_config(tmp_path, capsys):
    code = main(["gauss-check", "--config", str(tmp_path / "missing.json")])
    assert code == 2
    assert capsys.readouterr().out.startswith("FAIL gauss-check: cli:")


def test_seed_override_reaches_the_report(tmp_path):
    raw = load_config_file(CONFIGS / "sphere-check.json")
    run("sphere-check", raw, {"out": str(tmp_path), "seed": 99})
    assert _report(tmp_path)["config"]["seed"] == 99


@pytest.mark.parametrize("data, field", [
    ({"command": "spectrum", "N": 100}, "N"),
    ({"command": "spectrum", "levels": [128, 128]}, "levels"),
    ({"command": "spectrum", "tolerances": {"gauss": 0}}, "tolerances.gauss"),
    ({"command": "reciprocity"}, "seed"),
    ({"command": "sphere-check", "seed": -1}, "seed"),
    ({"command": "spectrum", "trials": 0}, "trials"),
    ({"command": "spectrum", "colour": "red"}, "colour"),
    ({"command": "spectrum", "curve": "ellipse"}, "curve"),
])
def test_parse_run_config_rejects(data, field):
    with pytest.raises(ConfigError) as info:
        parse_run_config(data)
    assert info.value.field == field


def test_command_must_match_the_document():
    with pytest.raises(ConfigError):
        parse_run_config({"command": "spectrum"}, command="dirichlet")


def test_n_override_replaces_the_first_level():
    config = parse_run_config({"command": "spectrum", "levels": [128, 256]}, overrides={"N": 512})
    assert config.N == 512
    assert config.levels == [256, 512]


def test_config_hash_ignores_the_output_directory():
    a = RunConfig(command="spectrum", out="x")
    b = RunConfig(command="spectrum", out="y")
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != RunConfig(command="spectrum", N=512).config_hash()
    assert a.tol("gauss", 1e-8) == 1e-8


def test_settings_come_from_the_environment(monkeypatch):
    monkeypatch.setenv("DLPLAB_DEFAULT_N", "64")
    monkeypatch.setenv("DLPLAB_LOG_LEVEL", "debug")
    reset_settings()
    settings = get_settings()
    assert settings.default_N == 64
    assert settings.log_level == "DEBUG"
    assert get_settings() is settings
    assert parse_run_config({"command": "spectrum"}, default_N=settings.default_N).N == 64


def test_bad_default_n_is_a_config_error(monkeypatch):
    monkeypatch.setenv("DLPLAB_DEFAULT_N", "many")
    reset_settings()
    with pytest.raises(ConfigError):
        get_settings()


def test_every_command_has_a_tool():
    from src.services.tools.registry import build_registry, get_tool
    from src.utils.run_config import COMMANDS
    assert set(build_registry()) == set(COMMANDS)
    assert get_tool("reflect").name == "reflect"
    with pytest.raises(KeyError):
        get_tool("plot")


def test_stage_skips_when_not_needed():
    from src.services.agents.checker import CheckerAgent
    from src.utils.messages import Message
    update = CheckerAgent()({"summary": "PASS spectrum: 1/1 checks passed", "messages": []})
    [message] = [Message.from_dict(m) for m in update["messages"]]
    assert message.content["status"] == "skipped"
    assert "completed_tasks" not in update


def test_linear_algebra_failure_exits_with_three():
    import numpy as np
    from src.services.agents.compute_worker import ComputeWorkerAgent
    from src.services.tools.base import BaseTool

    class DivergentTool(BaseTool):
        name = "spectrum"
        commands = ("spectrum",)

        def execute(self, config):
            raise np.linalg.LinAlgError("SVD did not converge")

    worker = ComputeWorkerAgent(registry={"spectrum": DivergentTool()})
    update = worker({"config": parse_run_config({"command": "spectrum"}), "result": None, "messages": []})
    assert update["exit_code"] == 3
    assert update["error"]["error"] == "LinAlgError"
    assert update["error"]["module"] == "lab"


def test_cubic_rdomain_config_passes(tmp_path):
    raw = load_config_file(CONFIGS / "trap-check-rdomain-cubic.json")
    state = run("trap-check", raw, {"out": str(tmp_path)})
    assert state["exit_code"] == 0, state["summary"]
    assert _report(tmp_path)["result"]["passed"]
