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

"""Tests for the JSON report writer"""

import json

import pytest

from tests_tsv.fixtures.config import get_config
from tests_tsv.fixtures.joint import JointFixture
from tsv.adapters.outbound.report_writer import JsonReportWriter, report_schema
from tsv.core.models import CheckRecord, SuiteReport
from tsv.ports.outbound.report import ReportWriterPort


def make_report(**overrides) -> SuiteReport:
    """A small report with one passing and one failed record."""
    records = [
        CheckRecord(
            subject="pp-wave",
            module="geometry_engine",
            op="curvature",
            identity="pp_condition",
            residual=1e-13,
            tolerance=1e-8,
            passed=True,
        ),
        CheckRecord(
            subject="pp-wave",
            module="spin_geometry",
            op="parallel_test",
            identity="raised",
            residual=None,
            tolerance=0.0,
            passed=False,
            error="NotParallelError: ...",
        ),
    ]
    fields = {
        "artifact_version": "1.0.0",
        "geometry": "pp-wave",
        "parameters": {"n": 4},
        "seed": 7,
        "records": records,
        "passed": False,
        "measurements": {"epsilon": 0},
        "wall_time": 0.5,
    }
    return SuiteReport(**(fields | overrides))


@pytest.mark.asyncio()
async def test_write_to_path(joint_fixture: JointFixture):
    """A written report parses back into the same model."""
    report = make_report()
    path = joint_fixture.report_dir / "report.json"

    text = await joint_fixture.report_writer.write(report=report, path=path)

    assert path.read_text(encoding="utf-8") == text + "\n"
    assert SuiteReport.model_validate_json(text) == report
    document = json.loads(text)
    assert document["records"][1]["residual"] is None
    assert document["measurements"] == {"epsilon": 0}


@pytest.mark.asyncio()
async def test_write_without_path(joint_fixture: JointFixture):
    """Without a path the document is only returned."""
    text = await joint_fixture.report_writer.write(report=make_report())
    assert json.loads(text)["geometry"] == "pp-wave"
    assert list(joint_fixture.report_dir.iterdir()) == []


def test_indent_setting():
    """Indent 0 renders a single line."""
    writer = JsonReportWriter(config=get_config(report_indent=0))
    assert "\n" not in writer.render(report=make_report())
    indented = JsonReportWriter(config=get_config(report_indent=2))
    assert "\n  " in indented.render(report=make_report())


def test_schema_requires_report_fields():
    """The report schema lists the fields every report carries."""
    schema = report_schema()
    assert set(schema["required"]) >= {
        "artifact_version",
        "geometry",
        "seed",
        "passed",
        "wall_time",
    }


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_invalid_report_rejected():
    """A report that breaks the schema is not rendered."""
    writer = JsonReportWriter(config=get_config())
    report = make_report()
    # bypass validation on assignment
    object.__setattr__(report, "seed", "seven")

    with pytest.raises(ReportWriterPort.ReportValidationError):
        writer.render(report=report)


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_validation_can_be_disabled():
    """With validation switched off the writer renders whatever it is given."""
    writer = JsonReportWriter(config=get_config(validate_reports=False))
    report = make_report()
    object.__setattr__(report, "seed", "seven")
    text = writer.render(report=report)
    assert json.loads(text)["seed"] == "seven"
