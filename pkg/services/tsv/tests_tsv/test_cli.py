# Copyright 2021 - 2024 Universität Tübingen, DKFZ, EMBL, and Universität zu Köln
# for the German Human Genome-Phenome Archive (GHGA)
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Tests for the command line interface and its exit codes"""

import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from tsv.cli import cli

runner = CliRunner()


@pytest.fixture(autouse=True)
def small_run(monkeypatch):
    """Keep command line runs small and quiet."""
    for key, value in {
        "TSV_RANDOM_SAMPLES": "12",
        "TSV_SPOT_POINTS": "1",
        "TSV_GRID_SIZE": "2",
        "TSV_LOG_LEVEL": "CRITICAL",
    }.items():
        monkeypatch.setenv(key, value)


def test_algebra_passes(tmp_path: Path):
    """A passing algebra suite exits with 0 and writes its report."""
    report_path = tmp_path / "algebra.json"
    result = runner.invoke(cli, ["algebra", "--n", "3", "--json", str(report_path)])

    assert result.exit_code == 0, result.output
    assert "algebra-n3" in result.output
    report = json.loads(report_path.read_text())
    assert report["passed"] is True
    assert report["parameters"] == {"n": 3}


def test_algebra_seed_is_reported(tmp_path: Path):
    """The seed given on the command line ends up in the report."""
    report_path = tmp_path / "algebra.json"
    result = runner.invoke(
        cli, ["algebra", "--n", "2", "--seed", "99", "--json", str(report_path)]
    )
    assert result.exit_code == 0, result.output
    assert json.loads(report_path.read_text())["seed"] == 99


def test_algebra_failure_exits_with_1():
    """A tolerance no residual can meet fails the run."""
    result = runner.invoke(cli, ["algebra", "--n", "3", "--tol", "1e-300"])
    assert result.exit_code == 1
    assert "FAILED" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ["algebra", "--n", "9"],
        ["geometry", "gödel"],
        ["geometry"],
        ["point", "minkowski", "--at", "2,0,0,0"],
        ["point", "minkowski", "--at", "a,b"],
        ["point", "minkowski", "--at", "0,0,0,0", "--what", "torsion"],
    ],
)
def test_usage_errors_exit_with_2(args: list[str]):
    """Invalid invocations are usage errors."""
    result = runner.invoke(cli, args)
    assert result.exit_code == 2


def test_geometry_from_params_file(tmp_path: Path):
    """A parameter file selects the geometry and its parameters."""
    params_path = tmp_path / "params.json"
    params_path.write_text(json.dumps({"name": "minkowski", "params": {"n": 3}}))
    report_path = tmp_path / "report.json"

    result = runner.invoke(
        cli, ["geometry", "--params", str(params_path), "--json", str(report_path)]
    )

    assert result.exit_code == 0, result.output
    report = json.loads(report_path.read_text())
    assert report["geometry"] == "minkowski"
    assert report["parameters"] == {"n": 3}


def test_params_file_errors(tmp_path: Path):
    """Unreadable or conflicting parameter files are usage errors."""
    params_path = tmp_path / "params.json"
    params_path.write_text(json.dumps({"name": "minkowski", "params": {"n": 40}}))
    assert runner.invoke(cli, ["geometry", "--params", str(params_path)]).exit_code == 2
    assert (
        runner.invoke(
            cli, ["geometry", "pp-wave", "--params", str(params_path)]
        ).exit_code
        == 2
    )
    missing = tmp_path / "missing.json"
    assert runner.invoke(cli, ["geometry", "--params", str(missing)]).exit_code == 2


def test_point_writes_json(tmp_path: Path):
    """Point evaluations are written as JSON documents."""
    output = tmp_path / "point.json"
    result = runner.invoke(
        cli,
        [
            "point",
            "minkowski",
            "--at",
            "0.1,0.2,0.3,0.4",
            "--what",
            "christoffel",
            "--json",
            str(output),
        ],
    )

    assert result.exit_code == 0, result.output
    values = json.loads(output.read_text())
    assert values["point"] == [0.1, 0.2, 0.3, 0.4]
    assert values["christoffel"] == [[[0.0] * 4] * 4] * 4


def test_point_pp_wave_ricci(tmp_path: Path):
    """The pp-wave Ricci tensor at a point is -1/2 of the transverse Laplacian of f."""
    output = tmp_path / "point.json"
    result = runner.invoke(
        cli,
        [
            "point",
            "pp-wave",
            "--at",
            "0.1,0.2,0.3,-0.1",
            "--what",
            "curvature",
            "--json",
            str(output),
        ],
    )

    assert result.exit_code == 0, result.output
    values = json.loads(output.read_text())
    ricci = values["ricci"]
    # f = x1^2 + 0.3 s x1^3 - x2^2 / 2 at s = 0.2, x1 = 0.3
    laplacian = 2.0 + 1.8 * 0.2 * 0.3 - 1.0
    assert ricci[1][1] == pytest.approx(-0.5 * laplacian, abs=1e-7)
    assert values["scalar"] == pytest.approx(0.0, abs=1e-7)

def test_suite_all(monkeypatch, tmp_path: Path):
    """The full sweep runs the algebra suites and the listed geometries."""
    monkeypatch.setattr("tsv.core.verifier.SWEEP_CASES", [("minkowski", {"n": 3})])
    report_path = tmp_path / "all.json"

    result = runner.invoke(cli, ["suite", "all", "--json", str(report_path)])

    report = json.loads(report_path.read_text())
    assert result.exit_code == (0 if report["passed"] else 1)
    assert len(report["parameters"]["suites"]) == 8
