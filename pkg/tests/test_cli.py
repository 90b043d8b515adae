import subprocess
from pathlib import Path
from typing import Any, List, Sequence

import pytest
from ruyaml import YAML


def run_subprocess(
    commands: Sequence[str], **kwargs: Any
) -> "subprocess.CompletedProcess[str]":
    return subprocess.run(
        commands,
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
        encoding="utf-8",
        **kwargs,
    )


@pytest.mark.parametrize(
    "args",
    [
        ["classes", "4", "--p", "5"],
        ["classes", "2"],
        ["solve", "3"],
        ["solve", "4"],
        ["verify", "identities"],
        ["verify", "dieudonne", "--g", "2", "--trials", "2"],
    ],
)
def test_cli(args: List[str]):
    ret = run_subprocess(["sslocus", *args])
    assert ret.returncode == 0, ret.stdout
    assert f"sslocus {args[0]}" in ret.stdout


@pytest.mark.parametrize(
    "args",
    [
        ["classes", "5"],
        ["solve", "5"],
        ["verify", "everything"],
        ["verify", "dieudonne", "--g", "0"],
    ],
)
def test_cli_usage_error(args: List[str]):
    ret = run_subprocess(["sslocus", *args])
    assert ret.returncode == 2, ret.stdout
    assert "error:" in ret.stdout


def test_cli_findings_do_not_fail():
    ret = run_subprocess(["sslocus", "solve", "4"])
    assert ret.returncode == 0, ret.stdout
    assert ret.stdout.splitlines()[0] == "sslocus solve (g=4): passed"
    assert "⚠️" in ret.stdout


def test_cli_structured_output_is_reproducible():
    cmd = ["sslocus", "solve", "4", "--format", "structured", "--log-level", "ERROR"]
    first = run_subprocess(cmd)
    second = run_subprocess(cmd)
    assert first.returncode == 0, first.stdout
    assert first.stdout == second.stdout
    data = YAML(typ="safe").load(first.stdout)
    assert data["schema_version"] == "1"
    assert data["command"] == "solve"
    assert data["parameters"] == {"g": 4}
    assert "wall_time" not in data
    assert {item["status"] for item in data["items"]} == {"pass", "finding"}


def test_cli_output(tmp_path: Path):
    out_path = tmp_path / "report.yaml"
    ret = run_subprocess(
        ["sslocus", "classes", "3", "--p", "2", "--output", str(out_path), "--timing"]
    )
    assert ret.returncode == 0, ret.stdout
    assert out_path.exists()
    data = YAML(typ="safe").load(out_path.read_text(encoding="utf-8"))
    assert data["command"] == "classes"
    assert data["wall_time"] >= 0
    assert "wall time:" in ret.stdout
